//! Literal grammars for command-line values.

use std::path::PathBuf;

use num_complex::Complex64;

/// Where a parse went wrong, as a 1-based character column.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub input: String,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} in `{}` at column {}", self.message, self.input, self.column)
    }
}

impl std::error::Error for ParseError {}

fn err(input: &str, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { input: input.to_string(), column, message: message.into() }
}

fn real(input: &str, part: &str, offset: usize) -> Result<f64, ParseError> {
    let v: f64 = part.parse().map_err(|_| err(input, offset + 1, format!("invalid number `{part}`")))?;
    if !v.is_finite() {
        return Err(err(input, offset + 1, "number must be finite"));
    }
    Ok(v)
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`. No spaces.
pub fn complex(input: &str) -> Result<Complex64, ParseError> {
    if input.is_empty() {
        return Err(err(input, 1, "empty complex literal"));
    }
    if let Some(pos) = input.find(char::is_whitespace) {
        return Err(err(input, pos + 1, "spaces are not allowed"));
    }
    let Some(body) = input.strip_suffix('i') else {
        return Ok(Complex64::new(real(input, input, 0)?, 0.0));
    };
    // the sign separating the parts: not at the start, not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im_part, im_offset) = match split {
        Some(k) => (real(input, &body[..k], 0)?, &body[k..], k),
        None => (0.0, body, 0),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => real(input, s, im_offset)?,
    };
    Ok(Complex64::new(re, im))
}

/// A parsed list; wrapped so clap treats it as one value.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

/// Comma-separated complex literals.
pub fn complex_list(input: &str) -> Result<List<Complex64>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for item in input.split(',') {
        out.push(complex(item).map_err(|e| err(input, offset + e.column, e.message))?);
        offset += item.len() + 1;
    }
    Ok(List(out))
}

/// `x1,x2,...` or `start:end:count` (inclusive, evenly spaced).
pub fn real_grid(input: &str) -> Result<List<f64>, ParseError> {
    grid_values(input).map(List)
}

fn grid_values(input: &str) -> Result<Vec<f64>, ParseError> {
    if input.contains(':') {
        let parts: Vec<&str> = input.split(':').collect();
        if parts.len() != 3 {
            return Err(err(input, 1, "range must be start:end:count"));
        }
        let start = real(input, parts[0], 0)?;
        let end = real(input, parts[1], parts[0].len() + 1)?;
        let col = parts[0].len() + parts[1].len() + 3;
        let count: usize = parts[2].parse().map_err(|_| err(input, col, format!("invalid count `{}`", parts[2])))?;
        return Ok(match count {
            0 => Vec::new(),
            1 => vec![start],
            n => (0..n).map(|k| start + (end - start) * k as f64 / (n - 1) as f64).collect(),
        });
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for item in input.split(',') {
        out.push(real(input, item, offset)?);
        offset += item.len() + 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Free,
    Constant(f64),
    Table(PathBuf),
}

/// `free`, `const:<c>` or `table:<path>`.
pub fn potential(input: &str) -> Result<PotentialSpec, ParseError> {
    if input == "free" {
        return Ok(PotentialSpec::Free);
    }
    if let Some(c) = input.strip_prefix("const:") {
        return Ok(PotentialSpec::Constant(real(input, c, 6)?));
    }
    if let Some(path) = input.strip_prefix("table:") {
        if path.is_empty() {
            return Err(err(input, 7, "missing table path"));
        }
        return Ok(PotentialSpec::Table(PathBuf::from(path)));
    }
    Err(err(input, 1, "expected `free`, `const:<c>` or `table:<path>`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(complex("0.5+0.5i").unwrap(), c(0.5, 0.5));
        assert_eq!(complex("1-2i").unwrap(), c(1.0, -2.0));
        assert_eq!(complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(complex("1+i").unwrap(), c(1.0, 1.0));
        assert_eq!(complex("-3i").unwrap(), c(0.0, -3.0));
        assert_eq!(complex("1e-3-2e+2i").unwrap(), c(1e-3, -200.0));
    }

    #[test]
    fn complex_errors_carry_columns() {
        assert_eq!(complex("1 + i").unwrap_err().column, 2);
        assert_eq!(complex("1+xi").unwrap_err().column, 2);
        assert!(complex("").is_err());
        assert!(complex("inf").is_err());
        assert_eq!(complex_list("1,2+yi").unwrap_err().column, 4);
    }

    #[test]
    fn grids() {
        assert_eq!(real_grid("2.5,3,5").unwrap().0, vec![2.5, 3.0, 5.0]);
        assert_eq!(real_grid("0:1:3").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert!(real_grid("0:1").is_err());
        assert_eq!(real_grid("0:1:x").unwrap_err().column, 5);
    }

    #[test]
    fn potentials() {
        assert_eq!(potential("free").unwrap(), PotentialSpec::Free);
        assert_eq!(potential("const:2").unwrap(), PotentialSpec::Constant(2.0));
        assert_eq!(potential("table:a.csv").unwrap(), PotentialSpec::Table(PathBuf::from("a.csv")));
        assert!(potential("cubic").is_err());
        assert_eq!(potential("const:x").unwrap_err().column, 7);
    }
}
