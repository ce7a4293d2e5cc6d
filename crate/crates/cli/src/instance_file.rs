//! The JSON instance format: `{"M": [[...], ...], "p": [...], "s": k}` with
//! optional `"planted_solution"` and `"seed"`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sparse_map::affine::AffineError;
use sparse_map::{Affine, Config, Instance, Matrix, Vector};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<f64>>,
    pub p: Vec<f64>,
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted_solution: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        file.validate()?;
        Ok(file)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Input(format!("field `{field}`: {msg}")));
        let Some(first) = self.matrix.first() else {
            return bad("M", "matrix has no rows".into());
        };
        let n = first.len();
        if n == 0 {
            return bad("M", "row 1 is empty".into());
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return bad("M", format!("row {} has {} entries, expected {n}", i + 1, row.len()));
            }
        }
        if self.p.len() != self.matrix.len() {
            return bad(
                "p",
                format!("has {} entries, expected one per row of M ({})", self.p.len(), self.matrix.len()),
            );
        }
        if self.s == 0 || self.s > n {
            return bad("s", format!("must satisfy 1 <= s <= n = {n}, got {}", self.s));
        }
        if let Some(c) = &self.planted_solution {
            if c.len() != n {
                return bad("planted_solution", format!("has {} entries, expected n = {n}", c.len()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.matrix[0].len()
    }

    /// The sparsity configuration and the affine set; an inconsistent `p`
    /// is an input error.
    pub fn build(&self, max_enum: Option<usize>) -> Result<(Config, Affine), CliError> {
        self.validate()?;
        let matrix = Matrix::from_rows(&self.matrix).map_err(|e| CliError::Input(format!("field `M`: {e}")))?;
        let rhs = Vector::from_slice(&self.p).map_err(|e| CliError::Input(format!("field `p`: {e}")))?;
        let affine = Affine::new(matrix, rhs).map_err(|e| match e {
            AffineError::InconsistentSystem { residual } => CliError::Input(format!(
                "inconsistent system: no x solves Mx = p (least-squares residual {residual:e})"
            )),
            other => CliError::Input(other.to_string()),
        })?;
        let mut cfg = Config::new(self.n(), self.s).map_err(|e| CliError::Input(format!("field `s`: {e}")))?;
        if let Some(cap) = max_enum {
            cfg = cfg.with_max_enum(cap);
        }
        Ok((cfg, affine))
    }

    pub fn planted(&self) -> Option<Vector> {
        self.planted_solution.as_deref().map(|c| Vector::from_slice(c).expect("finite JSON numbers"))
    }
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        Self {
            matrix: inst.matrix.to_rows(),
            p: inst.rhs.to_vec(),
            s: inst.s,
            planted_solution: Some(inst.planted.to_vec()),
            seed: Some(inst.seed),
        }
    }
}
