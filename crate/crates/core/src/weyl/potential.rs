use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Free,
    Constant(f64),
    /// Linear interpolation between `(x, q)` nodes; `tail` beyond the last node.
    Table {
        nodes: Vec<(f64, f64)>,
        tail: f64,
    },
}

/// Potential `q(x)` of `−y″ + q y` on `[a, +∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub a: f64,
    pub kind: PotentialKind,
    pub description: String,
}

impl Potential {
    pub fn free(a: f64) -> Self {
        Self {
            a,
            kind: PotentialKind::Free,
            description: "free".into(),
        }
    }

    pub fn constant(a: f64, c: f64) -> Self {
        Self {
            a,
            kind: PotentialKind::Constant(c),
            description: format!("const:{c}"),
        }
    }

    /// Table potential; the left endpoint is the first node.
    pub fn table(
        nodes: Vec<(f64, f64)>,
        tail: f64,
        description: impl Into<String>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Input(
                "table potential needs at least one node".into(),
            ));
        }
        if nodes.iter().any(|(x, q)| !x.is_finite() || !q.is_finite()) || !tail.is_finite() {
            return Err(Error::Input("table potential values must be finite".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1].0 <= w[0].0) {
            return Err(Error::Input(format!(
                "table nodes must be strictly increasing in x ({} then {})",
                w[0].0, w[1].0
            )));
        }
        Ok(Self {
            a: nodes[0].0,
            kind: PotentialKind::Table { nodes, tail },
            description: description.into(),
        })
    }

    /// Read a CSV table with header `x,q`; lines starting with `#` are
    /// comments. The value at the last node continues as the tail.
    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_csv_reader(&mut reader, format!("table:{}", path.display()))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        Self::from_csv_reader(&mut reader, "table".to_string())
    }

    fn from_csv_reader<R: std::io::Read>(
        reader: &mut csv::Reader<R>,
        description: String,
    ) -> Result<Self> {
        let headers = reader
            .headers()
            .map_err(|e| Error::Input(format!("potential table: {e}")))?;
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "q" {
            return Err(Error::Input(format!(
                "potential table header must be `x,q`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut nodes = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Input(format!("potential table: {e}")))?;
            let parse = |i: usize| -> Result<f64> {
                record[i].parse::<f64>().map_err(|_| {
                    Error::Input(format!(
                        "potential table row {}: cannot parse `{}`",
                        line + 1,
                        &record[i]
                    ))
                })
            };
            nodes.push((parse(0)?, parse(1)?));
        }
        let tail = nodes.last().map(|n| n.1).unwrap_or(0.0);
        Self::table(nodes, tail, description)
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Free => 0.0,
            PotentialKind::Constant(c) => *c,
            PotentialKind::Table { nodes, tail } => {
                let last = nodes[nodes.len() - 1];
                if x >= last.0 {
                    return *tail;
                }
                if x <= nodes[0].0 {
                    return nodes[0].1;
                }
                let i = nodes.partition_point(|n| n.0 <= x);
                let (x0, q0) = nodes[i - 1];
                let (x1, q1) = nodes[i];
                q0 + (q1 - q0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Value of `q` beyond the last node; the essential spectrum is `[tail, ∞)`.
    pub fn tail_value(&self) -> f64 {
        match &self.kind {
            PotentialKind::Free => 0.0,
            PotentialKind::Constant(c) => *c,
            PotentialKind::Table { tail, .. } => *tail,
        }
    }

    pub fn min_value(&self) -> f64 {
        match &self.kind {
            PotentialKind::Table { nodes, tail } => nodes.iter().map(|n| n.1).fold(*tail, f64::min),
            _ => self.tail_value(),
        }
    }

    /// Points in `(a, ∞)` where `q′` may jump.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            PotentialKind::Table { nodes, .. } => nodes.iter().skip(1).map(|n| n.0).collect(),
            _ => Vec::new(),
        }
    }

    /// Last point where `q` is not yet constant.
    pub fn support_end(&self) -> f64 {
        match &self.kind {
            PotentialKind::Table { nodes, .. } => nodes[nodes.len() - 1].0,
            _ => self.a,
        }
    }
}
