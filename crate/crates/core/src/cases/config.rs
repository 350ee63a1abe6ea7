use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::exact::ExactSolution;
use crate::field::DiffusionField;
use crate::mesh::{
    generate_cartesian, generate_hexagonal, generate_locally_refined, load_mesh, Mesh, MeshFormat,
};
use crate::system::{SolverKind, SolverOptions};
use crate::{HhoError, Result, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    /// Layered anisotropic tensor on locally refined meshes.
    A,
    /// Identity tensor on increasingly skewed hexagonal meshes.
    B,
    /// `diag(1e6, 1)` on skewed or regular hexagonal meshes.
    C,
    Custom,
}

impl FromStr for CaseId {
    type Err = HhoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(CaseId::A),
            "b" => Ok(CaseId::B),
            "c" => Ok(CaseId::C),
            "custom" => Ok(CaseId::Custom),
            other => Err(HhoError::Config(format!(
                "unknown case '{other}' (A | B | C | custom)"
            ))),
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CaseId::A => "A",
            CaseId::B => "B",
            CaseId::C => "C",
            CaseId::Custom => "custom",
        })
    }
}

/// Columns per row of the hexagonal families, by level.
pub const HEX_COLUMNS: [usize; 5] = [8, 16, 32, 48, 96];
/// Stretch per column of the skewed family: `fl_h` grows like `1 / h`.
pub const SKEW_STRETCH_PER_COLUMN: f64 = 0.28;

/// Mesh sequences; levels are numbered from 1.
#[derive(Clone, Debug, PartialEq)]
pub enum MeshFamily {
    /// `2^(l+1) x 2^(l+1)` squares.
    Cartesian,
    /// `2^(l+1)` squares per side with the lower-left corner refined twice.
    LocallyRefined,
    /// Hexagonal tiling with a fixed stretch.
    Hexagonal { stretch: f64 },
    /// Hexagonal tiling whose stretch grows with the number of columns.
    SkewedHexagonal,
    /// One mesh file per level.
    Files(Vec<PathBuf>),
}

impl MeshFamily {
    pub fn max_level(&self) -> usize {
        match self {
            MeshFamily::Cartesian | MeshFamily::LocallyRefined => 9,
            MeshFamily::Hexagonal { .. } | MeshFamily::SkewedHexagonal => HEX_COLUMNS.len(),
            MeshFamily::Files(f) => f.len(),
        }
    }

    pub fn mesh(&self, level: usize) -> Result<Mesh> {
        if level == 0 || level > self.max_level() {
            return Err(HhoError::Config(format!(
                "level {level} outside 1..={}",
                self.max_level()
            )));
        }
        Ok(match self {
            MeshFamily::Cartesian => generate_cartesian(1 << (level + 1)),
            MeshFamily::LocallyRefined => generate_locally_refined(1 << (level + 1), 2),
            MeshFamily::Hexagonal { stretch } => {
                generate_hexagonal(HEX_COLUMNS[level - 1], *stretch)
            }
            MeshFamily::SkewedHexagonal => {
                let n = HEX_COLUMNS[level - 1];
                generate_hexagonal(n, SKEW_STRETCH_PER_COLUMN * n as f64)
            }
            MeshFamily::Files(f) => load_mesh(&f[level - 1], MeshFormat::from_path(&f[level - 1]))?,
        })
    }

    pub fn parse(name: &str, stretch: Option<f64>) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "cartesian" => Ok(MeshFamily::Cartesian),
            "locref" | "locally-refined" => Ok(MeshFamily::LocallyRefined),
            "hexagonal" | "hexa" => Ok(MeshFamily::Hexagonal {
                stretch: stretch.unwrap_or(1.0),
            }),
            "skewed" | "skewed-hexagonal" => Ok(MeshFamily::SkewedHexagonal),
            other => Err(HhoError::Config(format!(
                "unknown mesh family '{other}' (cartesian | locref | hexagonal | skewed)"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            MeshFamily::Cartesian => "cartesian".into(),
            MeshFamily::LocallyRefined => "locref".into(),
            MeshFamily::Hexagonal { stretch } => format!("hexagonal(stretch={stretch})"),
            MeshFamily::SkewedHexagonal => "skewed".into(),
            MeshFamily::Files(_) => "files".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffusionSpec {
    Constant(Tensor),
    /// `diag(lambda, 1)` below `y = 1/2`, identity above.
    Layered {
        lambda: f64,
    },
}

impl DiffusionSpec {
    pub fn field(&self) -> DiffusionField {
        match *self {
            DiffusionSpec::Constant(k) => DiffusionField::Constant(k),
            DiffusionSpec::Layered { lambda } => DiffusionField::Layered { lambda },
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseConfig {
    pub case: CaseId,
    pub k: usize,
    pub family: MeshFamily,
    pub levels: Vec<usize>,
    pub diffusion: DiffusionSpec,
    pub exact: ExactSolution,
    pub out: Option<PathBuf>,
    pub solver: SolverOptions,
    /// Estimate the 1-norm condition number of each condensed system.
    pub condition_number: bool,
}

impl CaseConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k > 3 {
            return Err(HhoError::Config(format!("degree {} outside 0..=3", self.k)));
        }
        if self.levels.is_empty() {
            return Err(HhoError::Config("empty level list".into()));
        }
        if self.levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HhoError::Config(
                "levels must be strictly increasing".into(),
            ));
        }
        for &l in &self.levels {
            if l == 0 || l > self.family.max_level() {
                return Err(HhoError::Config(format!(
                    "level {l} outside 1..={}",
                    self.family.max_level()
                )));
            }
        }
        let ok = match self.diffusion {
            DiffusionSpec::Layered { lambda } => lambda > 0.0 && lambda.is_finite(),
            DiffusionSpec::Constant(k) => crate::poly::check_spd(&k).is_ok(),
        };
        if !ok {
            return Err(HhoError::Config(
                "diffusion tensor must be SPD (lambda > 0)".into(),
            ));
        }
        if let MeshFamily::Hexagonal { stretch } = self.family {
            if !(stretch >= 1.0 && stretch.is_finite()) {
                return Err(HhoError::Config(format!("stretch {stretch} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Accumulates `key = value` settings from a file and from flags, later
/// settings overriding earlier ones.
#[derive(Clone, Debug, Default)]
pub struct ConfigBuilder {
    case: Option<CaseId>,
    k: Option<usize>,
    levels: Option<Vec<usize>>,
    lambda: Option<f64>,
    stretch: Option<f64>,
    family: Option<String>,
    mesh: Option<Vec<PathBuf>>,
    out: Option<PathBuf>,
    solver: Option<SolverKind>,
    exact: Option<ExactSolution>,
    cn: Option<bool>,
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| HhoError::Config(format!("invalid value '{v}' for '{key}'")))
}

/// `1,2,3` or `1-4`.
pub fn parse_levels(v: &str) -> Result<Vec<usize>> {
    let v = v.trim();
    if let Some((a, b)) = v.split_once('-') {
        let (a, b): (usize, usize) = (parse_num("levels", a)?, parse_num("levels", b)?);
        return Ok((a..=b).collect());
    }
    v.split(',').map(|s| parse_num("levels", s)).collect()
}

impl ConfigBuilder {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "case" => self.case = Some(v.parse()?),
            "k" => self.k = Some(parse_num(key, v)?),
            "levels" => self.levels = Some(parse_levels(v)?),
            "lambda" => self.lambda = Some(parse_num(key, v)?),
            "stretch" => self.stretch = Some(parse_num(key, v)?),
            "family" => self.family = Some(v.to_string()),
            "mesh" => self.mesh = Some(v.split(',').map(|p| PathBuf::from(p.trim())).collect()),
            "out" => self.out = Some(PathBuf::from(v)),
            "solver" => self.solver = Some(v.parse()?),
            "exact" => self.exact = Some(v.parse()?),
            "cn" => {
                self.cn = Some(match v {
                    "1" | "true" | "yes" | "on" => true,
                    "0" | "false" | "no" | "off" => false,
                    _ => return Err(HhoError::Config(format!("invalid value '{v}' for 'cn'"))),
                })
            }
            other => return Err(HhoError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn read_str(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HhoError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(k, v)
                .map_err(|e| HhoError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn read_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HhoError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.read_str(&text)
    }

    pub fn build(&self) -> Result<CaseConfig> {
        let case = self.case.unwrap_or(CaseId::Custom);
        let default_family = match case {
            CaseId::A => "locref",
            CaseId::B | CaseId::C => "skewed",
            CaseId::Custom if self.stretch.is_some() => "hexagonal",
            CaseId::Custom => "cartesian",
        };
        let family = match &self.mesh {
            Some(paths) => MeshFamily::Files(paths.clone()),
            None => MeshFamily::parse(
                self.family.as_deref().unwrap_or(default_family),
                self.stretch,
            )?,
        };
        let lambda = self.lambda;
        let diffusion = match case {
            CaseId::A => DiffusionSpec::Layered {
                lambda: lambda.unwrap_or(1.0),
            },
            CaseId::B => DiffusionSpec::Constant(Tensor::new(lambda.unwrap_or(1.0), 0.0, 0.0, 1.0)),
            CaseId::C => DiffusionSpec::Constant(Tensor::new(lambda.unwrap_or(1e6), 0.0, 0.0, 1.0)),
            CaseId::Custom => {
                DiffusionSpec::Constant(Tensor::new(lambda.unwrap_or(1.0), 0.0, 0.0, 1.0))
            }
        };
        let levels = match (&self.levels, &family) {
            (Some(l), _) => l.clone(),
            (None, MeshFamily::Files(f)) => (1..=f.len()).collect(),
            (None, _) => (1..=4).collect(),
        };
        let solver = SolverOptions {
            kind: self.solver.unwrap_or(SolverKind::Direct),
            ..SolverOptions::default()
        };
        let config = CaseConfig {
            case,
            k: self.k.unwrap_or(1),
            family,
            levels,
            diffusion,
            exact: self.exact.unwrap_or(ExactSolution::Cosine),
            out: self.out.clone(),
            solver,
            condition_number: self.cn.unwrap_or(true),
        };
        config.validate()?;
        Ok(config)
    }
}
