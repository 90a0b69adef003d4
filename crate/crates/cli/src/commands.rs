use std::fmt;
use std::path::Path;

use log::info;
use serde::Serialize;
use serde_json::Value;
use thr_core::acceptance::{self, CriterionResult, CRITERIA};
use thr_core::cubes::{default_spot_weight, p1_report, pn_report, psigma_report};
use thr_core::dihedral::{dihedral_nerve_piece, dihedral_nerve_piece_windowed, validate_structure, TruncSet, ValidationReport};
use thr_core::homology::{normalized_chains, HomologyEntry};
use thr_core::involutive_algebra::spec::{parse_monoid, parse_ring, parse_ring_hom, read_to_string};
use thr_core::mackey::MackeySummary;
use thr_core::thr_pi0::{is_alpha_iso, pi0_thr, ses_check, verify_etale_base_change, AlphaVerdict, SesReport};
use thr_core::{Error, InvolutiveRing};

use crate::render;

/// A finished computation: the structured report, its table rendering and
/// whether every certificate in it passed.
pub struct Outcome {
    pub command: &'static str,
    pub ok: bool,
    pub report: Value,
    pub table: String,
}

impl Outcome {
    fn new<T: Serialize>(command: &'static str, ok: bool, report: &T, table: String) -> Result<Self, CommandError> {
        let report = serde_json::to_value(report).map_err(|e| CommandError::Core(Error::Internal(e.to_string())))?;
        Ok(Outcome { command, ok, report, table })
    }

    pub fn exit_code(&self) -> u8 {
        if self.ok {
            0
        } else {
            4
        }
    }
}

#[derive(Debug)]
pub enum CommandError {
    MissingPath(String),
    Core(Error),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::MissingPath(_) => 2,
            CommandError::Core(Error::Infinite(_)) => 3,
            CommandError::Core(Error::Internal(_) | Error::NotIso(_)) => 4,
            CommandError::Core(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CommandError::MissingPath(_) => "input",
            CommandError::Core(e) => match e {
                Error::Shape(_) => "shape",
                Error::IllDefined(_) => "ill_defined",
                Error::NotComposable(_) => "not_composable",
                Error::NotIso(_) => "not_iso",
                Error::RingAxiom(_) => "ring_axiom",
                Error::MackeyAxiom(_) => "mackey_axiom",
                Error::ModuleAxiom(_) => "module_axiom",
                Error::Unsupported(_) => "unsupported",
                Error::Infinite(_) => "infinite",
                Error::Truncation(_) => "truncation",
                Error::OutOfRange(_) => "out_of_range",
                Error::Internal(_) => "internal",
                Error::SpecFile(_) => "spec_file",
            },
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::MissingPath(p) => write!(f, "no such file: {p}"),
            CommandError::Core(e @ Error::Infinite(_)) => {
                write!(f, "{e} (pass --window to use the bounded model)")
            }
            CommandError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

fn read(path: &Path) -> Result<String, CommandError> {
    if !path.is_file() {
        return Err(CommandError::MissingPath(path.display().to_string()));
    }
    Ok(read_to_string(path)?)
}

fn load_ring(path: &Path) -> Result<InvolutiveRing, CommandError> {
    let text = read(path)?;
    parse_ring(&text).map_err(|e| CommandError::Core(locate(e, path)))
}

/// Prefixes the message of a spec error with the offending file.
fn locate(e: Error, path: &Path) -> Error {
    match e {
        Error::SpecFile(m) => Error::SpecFile(format!("{}: {m}", path.display())),
        Error::RingAxiom(m) => Error::RingAxiom(format!("{}: {m}", path.display())),
        other => other,
    }
}

#[derive(Serialize)]
pub struct RingInfo {
    pub generators: Vec<String>,
    pub additive: String,
    pub trivial_involution: bool,
}

impl RingInfo {
    fn of(r: &InvolutiveRing) -> Self {
        RingInfo {
            generators: r.names().to_vec(),
            additive: r.additive().invariants().to_string(),
            trivial_involution: r.has_trivial_involution(),
        }
    }
}

#[derive(Serialize)]
pub struct Pi0ThrReport {
    pub ring: RingInfo,
    pub mackey: MackeySummary,
    pub t_generators: usize,
    pub ses: SesReport,
    pub alpha: AlphaVerdict,
}

pub fn pi0thr(spec: &Path) -> Result<Outcome, CommandError> {
    let ring = load_ring(spec)?;
    info!("computing pi0 THR for {}", spec.display());
    let p = pi0_thr(&ring)?;
    let report = Pi0ThrReport {
        ring: RingInfo::of(&ring),
        mackey: p.mackey().summary(),
        t_generators: p.t_generators.len(),
        ses: ses_check(&ring)?,
        alpha: is_alpha_iso(&ring)?,
    };
    let table = render::pi0thr(&report);
    Outcome::new("pi0thr", report.ses.exact, &report, table)
}

#[derive(Serialize)]
pub struct BaseChangeReport {
    pub source: RingInfo,
    pub target: RingInfo,
    pub images: Vec<String>,
    pub comparison: thr_core::thr_pi0::EtaleReport,
}

pub fn basechange(source: &Path, target: &Path, hom: &Path) -> Result<Outcome, CommandError> {
    let a = load_ring(source)?;
    let b = load_ring(target)?;
    let text = read(hom)?;
    let f = parse_ring_hom(&text, &a, &b).map_err(|e| match e {
        Error::SpecFile(m) => Error::SpecFile(format!("{}: {m}", hom.display())),
        Error::IllDefined(m) => Error::IllDefined(format!("{}: {m}", hom.display())),
        other => other,
    })?;
    info!("comparing base change along {}", hom.display());
    let comparison = verify_etale_base_change(&f)?;
    let images = (0..a.n_gens())
        .map(|k| render::element(&f.apply(&a.additive().generator(k)), b.names()))
        .collect();
    let report = BaseChangeReport { source: RingInfo::of(&a), target: RingInfo::of(&b), images, comparison };
    let table = render::basechange(&report);
    Outcome::new("basechange", true, &report, table)
}

pub struct NerveOptions {
    pub weight: Vec<i64>,
    pub q_max: usize,
    pub window: Option<i64>,
    pub homology: bool,
    pub fixed_pi0: bool,
    pub validate: bool,
}

#[derive(Serialize)]
pub struct FixedPi0 {
    pub depth: usize,
    pub count: usize,
    pub representatives: Vec<Vec<i64>>,
}

#[derive(Serialize)]
pub struct NerveReport {
    pub label: String,
    pub weights: Vec<Vec<i64>>,
    pub q_max: usize,
    pub window: Option<i64>,
    pub substitution: Option<String>,
    pub simplices: Vec<usize>,
    pub nondegenerate: Vec<usize>,
    pub homology: Option<Vec<HomologyEntry>>,
    pub fixed_pi0: Option<FixedPi0>,
    pub validation: Option<ValidationReport>,
}

pub fn nerve(spec: &Path, opts: &NerveOptions) -> Result<Outcome, CommandError> {
    let text = read(spec)?;
    let m = parse_monoid(&text).map_err(|e| CommandError::Core(locate(e, spec)))?;
    if opts.weight.len() != m.rank() {
        return Err(Error::Shape(format!("weight has {} coordinates but the monoid has rank {}", opts.weight.len(), m.rank())).into());
    }
    let mut weights = vec![opts.weight.clone(), m.apply_involution(&opts.weight)];
    weights.sort();
    weights.dedup();
    let build = |q_max: usize| -> Result<TruncSet, Error> {
        match opts.window {
            None => dihedral_nerve_piece(&m, &weights, q_max),
            Some(w) => dihedral_nerve_piece_windowed(&m, &weights, q_max, w),
        }
    };
    info!("building the weight piece to degree {}", opts.q_max);
    let x = build(opts.q_max)?;
    let homology = if opts.homology {
        info!("computing homology");
        Some(normalized_chains(&x).homology_table()?)
    } else {
        None
    };
    let fixed_pi0 = if opts.fixed_pi0 {
        // Components of the subdivision only need degrees 1 and 3.
        let depth = opts.q_max.max(3);
        info!("fixed points of the edgewise subdivision from degree {depth}");
        let deep = if depth == opts.q_max { x.clone() } else { build(depth)? };
        let pi0 = deep.sd_sigma()?.fixed_subset()?.pi0();
        Some(FixedPi0 { depth, count: pi0.count, representatives: pi0.representatives })
    } else {
        None
    };
    let validation = opts.validate.then(|| validate_structure(&x));
    let report = NerveReport {
        label: x.label().to_string(),
        weights,
        q_max: opts.q_max,
        window: opts.window,
        substitution: opts.window.map(|w| {
            format!("bounded model: entries x_1..x_q at most {w} coordinatewise; rotations dropped, faces and the involution kept; homology is that of the bounded model")
        }),
        simplices: (0..=opts.q_max).map(|q| x.count(q)).collect(),
        nondegenerate: x.nondegenerate_counts(),
        homology,
        fixed_pi0,
        validation,
    };
    let ok = report.validation.as_ref().is_none_or(|v| v.ok);
    let table = render::nerve(&report);
    Outcome::new("nerve", ok, &report, table)
}

pub fn projective(space: &str, window: i64) -> Result<Outcome, CommandError> {
    info!("certifying weights for {space} in window {window}");
    match space {
        "1" => {
            let r = p1_report(window)?;
            let table = render::p1(&r);
            Outcome::new("projective", r.ok, &r, table)
        }
        "sigma" => {
            let r = psigma_report()?;
            let table = render::psigma(&r);
            Outcome::new("projective", r.ok, &r, table)
        }
        n => {
            let n: usize = n.parse().map_err(|_| Error::OutOfRange(format!("unknown space {n}")))?;
            let r = pn_report(n, window, &[default_spot_weight(n)])?;
            let table = render::pn(&r);
            Outcome::new("projective", r.ok, &r, table)
        }
    }
}

#[derive(Serialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub total: usize,
    pub criteria: Vec<CriterionResult>,
}

pub fn selftest(only: Option<u32>) -> Result<Outcome, CommandError> {
    let mut criteria = Vec::new();
    for &(id, title, _) in CRITERIA.iter().filter(|c| only.is_none_or(|o| o == c.0)) {
        info!("criterion {id}: {title}");
        let r = acceptance::run(id).ok_or_else(|| Error::OutOfRange(format!("no criterion {id}")))?;
        info!("{}", r.line());
        criteria.push(r);
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    let report = SelftestReport { passed, total: criteria.len(), criteria };
    let table = render::selftest(&report);
    Outcome::new("selftest", passed == report.total, &report, table)
}
