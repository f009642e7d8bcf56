use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use psimt::geometry::{load_off, load_tet, make_ellipsoid, make_sphere, TetrahedralMesh, TriangulatedSurface};
use psimt::operators::{FnField, GridField, QuaternionField, SharedField};
use psimt::probes::fibonacci_sphere;
use psimt::structural::make_psi_theta;
use psimt::transforms::{BoundaryField, KernelField};
use psimt::{Complex, ComplexQuaternion, Point};
use serde::Serialize;

use crate::CliError;

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn vector(v: [f64; 3]) -> ComplexQuaternion {
    ComplexQuaternion::from_vector(v.map(|x| Complex::new(x, 0.0)))
}

/// `sphere[:level]`, `ellipsoid:a,b,c[:level]` or the path of an OFF file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum MeshSpec {
    Sphere { level: Option<u32> },
    Ellipsoid { axes: [f64; 3], level: Option<u32> },
    File(PathBuf),
}

impl FromStr for MeshSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse_level = |v: &str| v.parse::<u32>().map_err(|_| format!("bad refinement level `{v}`"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["sphere"] => Ok(MeshSpec::Sphere { level: None }),
            ["sphere", l] => Ok(MeshSpec::Sphere {
                level: Some(parse_level(l)?),
            }),
            ["ellipsoid", axes] | ["ellipsoid", axes, _] => {
                let a: Vec<f64> = axes
                    .split(',')
                    .map(|v| v.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| format!("bad ellipsoid axes `{axes}`"))?;
                let axes: [f64; 3] = a.try_into().map_err(|_| "ellipsoid needs three axes a,b,c".to_string())?;
                let level = match parts.get(2) {
                    Some(l) => Some(parse_level(l)?),
                    None => None,
                };
                Ok(MeshSpec::Ellipsoid { axes, level })
            }
            _ => Ok(MeshSpec::File(PathBuf::from(s))),
        }
    }
}

impl MeshSpec {
    pub fn is_builtin(&self) -> bool {
        !matches!(self, MeshSpec::File(_))
    }

    /// Level given in the mesh argument, else `default`.
    pub fn level(&self, default: u32) -> u32 {
        match self {
            MeshSpec::Sphere { level } | MeshSpec::Ellipsoid { level, .. } => level.unwrap_or(default),
            MeshSpec::File(_) => default,
        }
    }
}

/// Surface and volume mesh selection shared by the mesh-based commands.
#[derive(clap::Args, Clone, Debug, Serialize)]
pub struct MeshArgs {
    /// `sphere[:level]`, `ellipsoid:a,b,c[:level]` or an OFF file.
    #[arg(long, default_value = "sphere")]
    pub mesh: MeshSpec,
    /// Tetrahedral mesh matching an OFF surface.
    #[arg(long)]
    pub tets: Option<PathBuf>,
    /// Refinement level of builtin meshes when the mesh argument gives none.
    #[arg(long, default_value_t = 3)]
    pub level: u32,
}

pub struct Geometry {
    pub surface: TriangulatedSurface,
    pub mesh: Option<TetrahedralMesh>,
    /// Refinement level of a builtin mesh.
    pub level: Option<u32>,
}

impl Geometry {
    pub fn tets(&self) -> Result<&TetrahedralMesh, CliError> {
        self.mesh
            .as_ref()
            .ok_or_else(|| config("this command needs a volume mesh: pass --tets with an OFF surface"))
    }
}

/// Build a builtin mesh at `level`, or load the files.
pub fn load_geometry(spec: &MeshSpec, level: u32, tets: Option<&Path>, need_tets: bool) -> Result<Geometry, CliError> {
    match spec {
        MeshSpec::Sphere { .. } => {
            let (s, m) = make_sphere([0.0; 3], 1.0, level)?;
            Ok(Geometry {
                surface: s,
                mesh: Some(m),
                level: Some(level),
            })
        }
        MeshSpec::Ellipsoid { axes, .. } => {
            let (s, m) = make_ellipsoid(*axes, level)?;
            Ok(Geometry {
                surface: s,
                mesh: Some(m),
                level: Some(level),
            })
        }
        MeshSpec::File(path) => {
            let surface = load_off(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
            let mesh = match tets {
                Some(t) => {
                    let m = load_tet(t).map_err(|e| config(format!("{}: {e}", t.display())))?;
                    m.check_matches_surface(&surface, 1e-9 * surface.diameter())?;
                    Some(m)
                }
                None if need_tets => return Err(config("an OFF surface needs --tets for this command")),
                None => None,
            };
            Ok(Geometry {
                surface,
                mesh,
                level: None,
            })
        }
    }
}

/// The next coarser builtin mesh, used for error estimates.
pub fn coarser(spec: &MeshSpec, level: u32, need_tets: bool) -> Result<Option<Geometry>, CliError> {
    if !spec.is_builtin() || level == 0 {
        return Ok(None);
    }
    load_geometry(spec, level - 1, None, need_tets).map(Some)
}

/// `builtin`, `fib:<n>` or the path of a CSV file of `x1,x2,x3` rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ProbeSpec {
    Builtin,
    Fibonacci(usize),
    File(PathBuf),
}

impl FromStr for ProbeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "builtin" {
            return Ok(ProbeSpec::Builtin);
        }
        if let Some(n) = s.strip_prefix("fib:") {
            let n: usize = n.parse().map_err(|_| format!("bad probe count `{n}`"))?;
            if n == 0 {
                return Err("probe count must be positive".into());
            }
            return Ok(ProbeSpec::Fibonacci(n));
        }
        Ok(ProbeSpec::File(PathBuf::from(s)))
    }
}

/// Interior and exterior probe shells for a surface: radius `0.3 ·
/// inradius` and `2 · circumradius` about the volume centroid.
pub fn shell_probes(surface: &TriangulatedSurface, n: usize) -> (Vec<Point>, Vec<Point>) {
    let c = surface.volume_centroid();
    (
        fibonacci_sphere(n, c, 0.3 * surface.inradius_estimate()),
        fibonacci_sphere(n, c, 2.0 * surface.circumradius(c)),
    )
}

/// Probe set split into points inside and outside the surface.
pub fn probes_for(
    spec: &ProbeSpec,
    surface: &TriangulatedSurface,
    builtin_count: usize,
) -> Result<(Vec<Point>, Vec<Point>), CliError> {
    match spec {
        ProbeSpec::Builtin => Ok(shell_probes(surface, builtin_count)),
        ProbeSpec::Fibonacci(n) => Ok(shell_probes(surface, *n)),
        ProbeSpec::File(path) => {
            let pts = read_points(path)?;
            Ok(pts.into_iter().partition(|&x| surface.contains(x)))
        }
    }
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| config(format!("{}: {e}", path.display())))
}

/// Numeric rows of a CSV file with `width` columns; a non-numeric first row
/// is taken as a header.
fn read_rows(path: &Path, width: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let mut rows = Vec::new();
    for (i, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| config(format!("{}: {e}", path.display())))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == width => rows.push(v),
            Ok(v) => {
                return Err(config(format!(
                    "{} line {}: expected {width} columns, found {}",
                    path.display(),
                    i + 1,
                    v.len()
                )))
            }
            Err(_) if i == 0 => continue,
            Err(_) => return Err(config(format!("{} line {}: non-numeric value", path.display(), i + 1))),
        }
    }
    Ok(rows)
}

pub fn read_points(path: &Path) -> Result<Vec<Point>, CliError> {
    let rows = read_rows(path, 3)?;
    if rows.is_empty() {
        return Err(config(format!("{}: no probe points", path.display())));
    }
    Ok(rows.into_iter().map(|r| [r[0], r[1], r[2]]).collect())
}

/// Rows `node_index, re f1, im f1, re f2, im f2, re f3, im f3`; every node
/// must appear exactly once.
pub fn read_boundary_data(path: &Path, surface: &TriangulatedSurface) -> Result<BoundaryField, CliError> {
    let n = surface.num_triangles();
    let mut values = vec![None; n];
    for r in read_rows(path, 7)? {
        let node = r[0];
        if node < 0.0 || node.fract() != 0.0 || node >= n as f64 {
            return Err(config(format!("{}: node index {node} outside 0..{n}", path.display())));
        }
        let slot = &mut values[node as usize];
        if slot.is_some() {
            return Err(config(format!("{}: node {node} given twice", path.display())));
        }
        *slot = Some(ComplexQuaternion::from_vector([
            Complex::new(r[1], r[2]),
            Complex::new(r[3], r[4]),
            Complex::new(r[5], r[6]),
        ]));
    }
    let values: Option<Vec<_>> = values.into_iter().collect();
    values
        .map(BoundaryField::new)
        .ok_or_else(|| config(format!("{}: boundary data must cover all {n} nodes", path.display())))
}

/// A field sampled on a regular grid: rows `x1, x2, x3` followed by the
/// eight real components, in any order.
pub fn read_grid(path: &Path) -> Result<GridField, CliError> {
    let rows = read_rows(path, 11)?;
    let axis = |k: usize| -> Result<(f64, f64, usize), CliError> {
        let mut v: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        if v.len() < 2 {
            return Err(config(format!("{}: grid needs two samples along axis {}", path.display(), k + 1)));
        }
        let step = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
        if v.windows(2).any(|w| ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0)) {
            return Err(config(format!("{}: axis {} is not uniformly spaced", path.display(), k + 1)));
        }
        Ok((v[0], step, v.len()))
    };
    let (a0, a1, a2) = (axis(0)?, axis(1)?, axis(2)?);
    let origin = [a0.0, a1.0, a2.0];
    let spacing = [a0.1, a1.1, a2.1];
    let dims = [a0.2, a1.2, a2.2];
    if rows.len() != dims[0] * dims[1] * dims[2] {
        return Err(config(format!(
            "{}: expected {} grid samples, found {}",
            path.display(),
            dims[0] * dims[1] * dims[2],
            rows.len()
        )));
    }
    let mut values = vec![ComplexQuaternion::ZERO; rows.len()];
    for r in &rows {
        let idx: [usize; 3] = std::array::from_fn(|k| ((r[k] - origin[k]) / spacing[k]).round() as usize);
        values[idx[0] + dims[0] * (idx[1] + dims[1] * idx[2])] = ComplexQuaternion::new(
            Complex::new(r[3], r[4]),
            Complex::new(r[5], r[6]),
            Complex::new(r[7], r[8]),
            Complex::new(r[9], r[10]),
        );
    }
    Ok(GridField::new(origin, spacing, dims, values)?)
}

/// Closed-form test fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinField {
    /// The scalar field x1.
    X1,
    /// The vector field x1 i.
    #[serde(rename = "x1i")]
    X1I,
    /// The vector field x2 i.
    #[serde(rename = "x2i")]
    X2I,
    /// The vector field x2 i + x1 k.
    X2ZeroX1,
    /// The kernel with its pole outside the domain.
    Kernel,
    /// `i` plus the kernel with its pole at the volume centroid.
    KernelPlusC,
}

impl BuiltinField {
    pub fn is_pure_vector(self) -> bool {
        self != BuiltinField::X1
    }

    /// Pole of the kernel for a domain of the given centre and
    /// circumradius: outside for `Kernel`, at the centre for `KernelPlusC`.
    pub fn pole(self, center: Point, radius: f64) -> Point {
        match self {
            BuiltinField::KernelPlusC => center,
            _ => [center[0], center[1] + 1.2 * radius, center[2] + 1.6 * radius],
        }
    }

    pub fn for_surface(self, theta: f64, surface: &TriangulatedSurface) -> SharedField {
        let c = surface.volume_centroid();
        self.build(theta, c, surface.circumradius(c))
    }

    pub fn constant() -> ComplexQuaternion {
        ComplexQuaternion::I
    }

    pub fn build(self, theta: f64, center: Point, radius: f64) -> SharedField {
        let kernel = KernelField::new(make_psi_theta(theta), self.pole(center, radius));
        match self {
            BuiltinField::X1 => Arc::new(FnField::new(|x: Point| {
                ComplexQuaternion::from_scalar(Complex::new(x[0], 0.0))
            })),
            BuiltinField::X1I => Arc::new(FnField::new(|x: Point| vector([x[0], 0.0, 0.0]))),
            BuiltinField::X2I => Arc::new(FnField::new(|x: Point| vector([x[1], 0.0, 0.0]))),
            BuiltinField::X2ZeroX1 => Arc::new(FnField::new(|x: Point| vector([x[1], 0.0, x[0]]))),
            BuiltinField::Kernel => Arc::new(kernel),
            BuiltinField::KernelPlusC => {
                let c = Self::constant();
                Arc::new(FnField::new(move |x| c + kernel.eval(x)))
            }
        }
    }
}
