use lsys_core::lsystem::{full_report, BoundaryParameter, ExtensionParameter, SchrodingerLSystem};
use lsys_core::weyl::WeylFunction;
use num_complex::Complex64;

#[test]
fn library_quick_start() -> lsys_core::Result<()> {
    let h = BoundaryParameter::new(Complex64::new(1.0, 1.0))?;
    let sys = SchrodingerLSystem::new(h, ExtensionParameter::Finite(0.0), WeylFunction::free())?;
    let v = sys.impedance(Complex64::new(-1.0, 0.0))?;
    assert!((v - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-12);
    let report = full_report(&sys)?;
    assert_eq!(report.class_label.name(), "inverse_stieltjes");
    assert!((report.tan_a2.unwrap() - 1.0).abs() < 1e-12);
    Ok(())
}
