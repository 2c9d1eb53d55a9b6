//! Experiment driver behind the command-line tool: grid pairs, remap runs,
//! convergence studies and censuses, written as CSV files.

pub mod config;
pub mod csv;

pub use config::{Family, RunConfig};

use crate::classify::{case_census, case_census_strict, Census, ClassifyError};
use crate::fields::{error_norms, init_cell_masses, ErrorNorms};
use crate::geom::GeomError;
use crate::gridgen::{random_grid, random_pair_admissible, tensor_grid, tensor_pair, GridError, OLD_GAMMA};
use crate::mesh::{validate_assumptions, AssumptionReport, MeshError, StructuredQuadMesh};
use crate::remap::{remap, RemapError, RemapResult};
use crate::swap::{census_check, polygons_csv, sweep_swap_regions, CensusReport};
use csv::{num, opt_int, opt_num, Table};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid value `{value}` for `{key}`")]
    InvalidValue { key: String, value: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Remap(#[from] RemapError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

fn geom_code(e: &GeomError) -> &'static str {
    match e {
        GeomError::NonFinite => "non_finite",
        GeomError::NonConvexInput => "non_convex_input",
        GeomError::OutsidePatch { .. } => "outside_patch",
    }
}

fn mesh_code(e: &MeshError) -> &'static str {
    match e {
        MeshError::TooSmall { .. } => "mesh_too_small",
        MeshError::DimensionMismatch { .. } => "dimension_mismatch",
        MeshError::NonSimpleCell(_) => "non_simple_cell",
        MeshError::OutOfBounds(_) => "out_of_bounds",
        MeshError::Geom(g) => geom_code(g),
        MeshError::Parse { .. } => "parse",
        MeshError::Io(_) => "io",
    }
}

impl HarnessError {
    /// Stable machine-readable code for the `error: <code>: <detail>` line.
    pub fn code(&self) -> &'static str {
        match self {
            HarnessError::Config { .. } => "config",
            HarnessError::InvalidValue { .. } => "invalid_value",
            HarnessError::Io(_) => "io",
            HarnessError::Grid(g) => match g {
                GridError::TooSmall(_) => "grid_too_small",
                GridError::InvalidGamma(_) => "invalid_gamma",
                GridError::DegenerateAlpha(_) => "degenerate_alpha",
                GridError::NoAdmissiblePair(_) => "no_admissible_pair",
                GridError::Mesh(m) => mesh_code(m),
            },
            HarnessError::Mesh(m) => mesh_code(m),
            HarnessError::Remap(r) => match r {
                RemapError::DimensionMismatch => "dimension_mismatch",
                RemapError::MissingDensity { .. } => "missing_density",
                RemapError::NonFiniteMass(_) => "non_finite_mass",
                RemapError::AssumptionViolated { .. } => "assumption_violated",
                RemapError::CollinearCurves(_) => "collinear_curves",
                RemapError::Inapplicable(_) => "inapplicable",
                RemapError::Geom(g) => geom_code(g),
                RemapError::Mesh(m) => mesh_code(m),
            },
            HarnessError::Classify(c) => match c {
                ClassifyError::InvalidCombination { .. } => "invalid_combination",
                ClassifyError::DegenerateEdge { .. } => "degenerate_edge",
                ClassifyError::MissingIntersection(_) => "missing_intersection",
                ClassifyError::Geom(g) => geom_code(g),
                ClassifyError::Mesh(m) => mesh_code(m),
            },
        }
    }

    /// Single-line diagnostic.
    pub fn line(&self) -> String {
        format!("error: {}: {}", self.code(), self.to_string().replace('\n', " "))
    }
}

fn io_err(path: &Path, e: std::io::Error) -> HarnessError {
    HarnessError::Io(format!("{}: {e}", path.display()))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

#[derive(Debug, Clone)]
pub struct GridPair {
    pub old: StructuredQuadMesh,
    pub new: StructuredQuadMesh,
    /// Seed actually used for random pairs after re-seeding.
    pub seed: Option<u64>,
    pub reseeds: u64,
}

pub fn grid_pair(cfg: &RunConfig, nx: usize) -> Result<GridPair, HarnessError> {
    match cfg.family {
        Family::Tensor => {
            let (old, new) = tensor_pair(nx, nx, cfg.rescale)?;
            Ok(GridPair {
                old,
                new,
                seed: None,
                reseeds: 0,
            })
        }
        Family::Random => {
            let p = random_pair_admissible(nx, cfg.seed)?;
            Ok(GridPair {
                old: p.old,
                new: p.new,
                seed: Some(p.seed),
                reseeds: p.reseeds,
            })
        }
    }
}

/// Single grid for `generate`: tensor at `t` (default `t1`) or random with
/// `gamma` (default the old-mesh amplitude).
pub fn generate_grid(cfg: &RunConfig) -> Result<StructuredQuadMesh, HarnessError> {
    Ok(match cfg.family {
        Family::Tensor => {
            let t = cfg.t.unwrap_or(1.0 / (320 + cfg.nx) as f64);
            tensor_grid(cfg.nx, cfg.nx, t, cfg.rescale)?
        }
        Family::Random => random_grid(cfg.nx, cfg.gamma.unwrap_or(OLD_GAMMA), cfg.seed)?,
    })
}

#[derive(Debug, Clone)]
pub struct CaseOutcome {
    pub nx: usize,
    pub pair: GridPair,
    pub assumptions: AssumptionReport,
    pub result: RemapResult,
    pub norms: ErrorNorms,
}

/// Build the pair, validate, initialize masses and remap.
pub fn run_case(cfg: &RunConfig, nx: usize) -> Result<CaseOutcome, HarnessError> {
    let pair = grid_pair(cfg, nx)?;
    let assumptions = validate_assumptions(&pair.old, &pair.new)?;
    let field = init_cell_masses(&pair.old, cfg.function);
    let result = remap(&pair.old, &pair.new, &field.masses, cfg.method)?;
    let norms = error_norms(&result, cfg.function, &pair.new);
    Ok(CaseOutcome {
        nx,
        pair,
        assumptions,
        result,
        norms,
    })
}

pub const SUMMARY_HEADER: [&str; 16] = [
    "family",
    "nx",
    "function",
    "method",
    "seed",
    "old_total",
    "new_total",
    "conservation_residual",
    "polygon_count",
    "ns_xx",
    "ns_yy",
    "degeneracy_events",
    "linf_density",
    "linf_mass",
    "reseeds",
    "wall_time_ms",
];

fn summary_row(cfg: &RunConfig, c: &CaseOutcome) -> Vec<String> {
    let r = &c.result;
    vec![
        cfg.family.to_string(),
        c.nx.to_string(),
        cfg.function.to_string(),
        r.method.to_string(),
        c.pair.seed.map(|s| s.to_string()).unwrap_or_default(),
        num(r.old_total),
        num(r.new_total),
        opt_num(r.conservation_residual),
        opt_int(r.polygon_count),
        opt_int(r.ns_xx),
        opt_int(r.ns_yy),
        r.degeneracy_events.to_string(),
        num(c.norms.linf_density),
        num(c.norms.linf_mass),
        c.pair.reseeds.to_string(),
        num(r.wall_time_ms),
    ]
}

/// Per-cell table of the new mesh, 1-based indices.
pub fn cells_table(c: &CaseOutcome, cfg: &RunConfig) -> Table {
    let mut t = Table::new(["i", "j", "x", "y", "area", "mass", "density", "exact_density"]);
    for cell in c.pair.new.cells() {
        let k = c.pair.new.cell_id(cell);
        let p = c.pair.new.cell_polygon(cell).vertex_mean();
        t.push(vec![
            (cell.i + 1).to_string(),
            (cell.j + 1).to_string(),
            num(p.x),
            num(p.y),
            num(c.result.areas[k]),
            num(c.result.masses[k]),
            num(c.result.densities[k]),
            num(cfg.function.eval(p.x, p.y)),
        ]);
    }
    t
}

#[derive(Debug, Clone)]
pub struct RemapReport {
    pub case: CaseOutcome,
    /// Summary CSV line without the header.
    pub summary: String,
}

/// One remap run; writes `cells.csv`, `summary.csv` and, for the
/// cell-intersection method, `polygons.csv` into `cfg.out`.
pub fn run_remap(cfg: &RunConfig) -> Result<RemapReport, HarnessError> {
    let case = run_case(cfg, cfg.nx)?;
    let mut summary = Table::new(SUMMARY_HEADER);
    let row = summary_row(cfg, &case);
    let line = row.join(",");
    summary.push(row);
    write_file(&cfg.out.join("summary.csv"), &summary.render())?;
    write_file(&cfg.out.join("cells.csv"), &cells_table(&case, cfg).render())?;
    if case.result.method == crate::Method::Cib {
        let sweep = sweep_swap_regions(&case.pair.old, &case.pair.new)?;
        write_file(&cfg.out.join("polygons.csv"), &polygons_csv(&sweep.polygons))?;
    }
    Ok(RemapReport { case, summary: line })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_order(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() || y.iter().any(|&v| v.is_nan() || v <= 0.0) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Errors at or below this level are rounding noise; no order is fitted.
pub const FIT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub nx: usize,
    pub h: f64,
    pub linf_density: f64,
    pub linf_mass: f64,
    pub conservation_residual: Option<f64>,
    pub n_swap_polygons: Option<usize>,
    pub ns_xx: Option<usize>,
    pub ns_yy: Option<usize>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub density_order: Option<f64>,
    pub mass_order: Option<f64>,
}

impl ConvergenceReport {
    /// Rows with raw errors and errors divided by those of the coarsest size.
    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "nx",
            "h",
            "linf_density",
            "linf_mass",
            "conservation_residual",
            "n_swap_polygons",
            "ns_xx",
            "ns_yy",
            "wall_time_ms",
            "linf_density_scaled",
            "linf_mass_scaled",
        ]);
        let base = self.rows.first();
        let scale = |v: f64, b: f64| if b > 0.0 { num(v / b) } else { String::new() };
        for r in &self.rows {
            let b = base.expect("rows exist");
            t.push(vec![
                r.nx.to_string(),
                num(r.h),
                num(r.linf_density),
                num(r.linf_mass),
                opt_num(r.conservation_residual),
                opt_int(r.n_swap_polygons),
                opt_int(r.ns_xx),
                opt_int(r.ns_yy),
                num(r.wall_time_ms),
                scale(r.linf_density, b.linf_density),
                scale(r.linf_mass, b.linf_mass),
            ]);
        }
        t
    }

    pub fn orders_table(&self) -> Table {
        let mut t = Table::new(["norm", "order"]);
        t.push(vec!["linf_density".into(), opt_num(self.density_order)]);
        t.push(vec!["linf_mass".into(), opt_num(self.mass_order)]);
        t
    }
}

/// Run every size (ordered by `nx`) and fit observed orders; writes
/// `convergence.csv` and `orders.csv` into `cfg.out`.
pub fn run_convergence(cfg: &RunConfig) -> Result<ConvergenceReport, HarnessError> {
    let report = convergence(cfg)?;
    write_file(&cfg.out.join("convergence.csv"), &report.table().render())?;
    write_file(&cfg.out.join("orders.csv"), &report.orders_table().render())?;
    Ok(report)
}

/// As [`run_convergence`] without writing files.
pub fn convergence(cfg: &RunConfig) -> Result<ConvergenceReport, HarnessError> {
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(HarnessError::InvalidValue {
            key: "sizes".into(),
            value: format!("{sizes:?} (need at least 3)"),
        });
    }
    let rows = sizes
        .iter()
        .map(|&nx| {
            let c = run_case(cfg, nx)?;
            Ok(ConvergenceRow {
                nx,
                h: 1.0 / (nx - 1) as f64,
                linf_density: c.norms.linf_density,
                linf_mass: c.norms.linf_mass,
                conservation_residual: c.result.conservation_residual,
                n_swap_polygons: c.result.polygon_count,
                ns_xx: c.result.ns_xx,
                ns_yy: c.result.ns_yy,
                wall_time_ms: c.result.wall_time_ms,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let fit = |e: Vec<f64>| {
        if e.iter().all(|&v| v <= FIT_FLOOR) {
            None
        } else {
            fit_order(&h, &e)
        }
    };
    Ok(ConvergenceReport {
        density_order: fit(rows.iter().map(|r| r.linf_density).collect()),
        mass_order: fit(rows.iter().map(|r| r.linf_mass).collect()),
        rows,
    })
}

#[derive(Debug, Clone)]
pub struct CensusOutcome {
    pub classification: Census,
    /// Swap-polygon count against the formula, or why it does not apply.
    pub swap: Result<CensusReport, RemapError>,
}

impl CensusOutcome {
    pub fn summary_table(&self) -> Table {
        let mut t = Table::new([
            "classified",
            "degenerate",
            "invalid",
            "unknown_labels",
            "polygon_count",
            "expected",
            "ns_xx",
            "ns_yy",
            "applicable",
            "count_matches",
            "strips_match",
            "degeneracy_events",
            "status",
        ]);
        let c = &self.classification;
        let mut row = vec![
            c.classified.to_string(),
            c.degenerate.to_string(),
            c.invalid.to_string(),
            c.unknown_labels().len().to_string(),
        ];
        match &self.swap {
            Ok(s) => row.extend([
                s.polygon_count.to_string(),
                s.expected.map(|e| e.to_string()).unwrap_or_default(),
                opt_int(s.singular.as_ref().map(|x| x.ns_xx)),
                opt_int(s.singular.as_ref().map(|x| x.ns_yy)),
                s.applicable.to_string(),
                if s.applicable {
                    s.count_matches().to_string()
                } else {
                    String::new()
                },
                if s.applicable {
                    s.strips_match().to_string()
                } else {
                    String::new()
                },
                s.degeneracy_events.to_string(),
                "ok".into(),
            ]),
            Err(e) => {
                row.extend(std::iter::repeat_n(String::new(), 8));
                row.push(HarnessError::from(e.clone()).code().to_string());
            }
        }
        t.push(row);
        t
    }

    pub fn strips_table(&self) -> Table {
        let mut t = Table::new(["i", "count", "expected"]);
        if let Ok(s) = &self.swap {
            for st in &s.strips {
                t.push(vec![
                    (st.i + 1).to_string(),
                    st.count.to_string(),
                    st.expected.to_string(),
                ]);
            }
        }
        t
    }
}

/// Classification and swap-polygon census of one pair.
pub fn census(cfg: &RunConfig) -> Result<CensusOutcome, HarnessError> {
    let pair = grid_pair(cfg, cfg.nx)?;
    let classification = if cfg.strict {
        case_census_strict(&pair.old, &pair.new)?
    } else {
        case_census(&pair.old, &pair.new)
    };
    let swap = census_check(&pair.old, &pair.new);
    if let Err(e @ (RemapError::Geom(_) | RemapError::Mesh(_) | RemapError::DimensionMismatch)) = &swap {
        return Err(e.clone().into());
    }
    Ok(CensusOutcome { classification, swap })
}

/// [`census`] plus `labels.csv`, `branch_paths.csv`, `census.csv` and
/// `strips.csv` in `cfg.out`.
pub fn run_census(cfg: &RunConfig) -> Result<CensusOutcome, HarnessError> {
    let out = census(cfg)?;
    write_file(&cfg.out.join("labels.csv"), &out.classification.to_csv())?;
    write_file(
        &cfg.out.join("branch_paths.csv"),
        &out.classification.branch_paths_csv(),
    )?;
    write_file(&cfg.out.join("census.csv"), &out.summary_table().render())?;
    write_file(&cfg.out.join("strips.csv"), &out.strips_table().render())?;
    Ok(out)
}
