use std::fs;
use std::path::Path;

use circstab::apolarity::{
    grace_check_disc, grace_check_halfplane, run_campaign, BracketSign, CampaignConfig, CampaignKind, DegreeReading,
    GraceConfig, GraceReport,
};
use circstab::compose::{compose_disc_forms, compose_halfplane_forms};
use circstab::domains::{moebius_for, phi_kappa, CircularDomain, DomainProduct};
use circstab::operators::{
    algebraic_symbol_disc, algebraic_symbol_general, algebraic_symbol_halfplane, classify_ladder,
    classify_preserver_evidence, symbol_names, transcendental_symbol_truncated, SymbolSign, LADDER,
};
use circstab::oracle::{find_zero, is_stable_exact_univariate, BoundaryPolicy, OracleConfig, StabilityVerdict};
use circstab::roots::univariate_roots;
use circstab::statmech::{
    circle_theorem_check, heilmann_lieb_check, heilmann_lieb_poly, lee_yang_check, lee_yang_exterior_check,
    zeros_csv, CircleCouplings, SpinSystem, WeightedGraph,
};
use circstab::{ExponentVector, MultiPoly, C64};
use serde::Serialize;

use crate::input::{
    builtin_builder, lib, operator, parse_domain, parse_kappa, parse_point, parse_product, read_json, read_poly, Res,
};
use crate::{CampaignChoice, Common, OperatorSource, Reading, Sign, Status, SymbolChoice, Variant};

fn oracle(common: &Common) -> OracleConfig {
    OracleConfig { slices_per_variable: common.slices, seed: common.seed, ..OracleConfig::default() }
}

fn write_file(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit<T: Serialize>(common: &Common, report: &T) -> Res<()> {
    if let Some(path) = &common.json {
        let mut text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
        text.push('\n');
        write_file(path, &text)?;
    }
    Ok(())
}

fn emit_csv(common: &Common, roots: &[C64]) -> Res<()> {
    if let Some(path) = &common.csv {
        write_file(path, &zeros_csv(roots))?;
    }
    Ok(())
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn complex(z: C64) -> String {
    format!("{:.12}{:+.12}i", z.re, z.im)
}

fn describe(verdict: &StabilityVerdict) -> String {
    match verdict {
        StabilityVerdict::Counterexample(w) => format!(
            "certified zero at ({}), residual {:.3e} (scale {:.3e}), boundary margin {:.3e}",
            w.point.iter().map(|&z| complex(z)).collect::<Vec<_>>().join(", "),
            w.residual,
            w.scale,
            w.boundary_margin
        ),
        StabilityVerdict::NoZeroFound { slices_per_variable, total_samples, min_abs_seen } => format!(
            "no zero found ({slices_per_variable} slices per variable, {total_samples} slices, smallest relative value {min_abs_seen:.3e})"
        ),
    }
}

#[derive(Serialize)]
struct StabilityReport {
    poly: MultiPoly,
    domains: Vec<CircularDomain>,
    seed: u64,
    verdict: StabilityVerdict,
    /// Root-based answer for univariate inputs.
    exact: Option<bool>,
    roots: Option<Vec<C64>>,
}

pub fn stability(path: &Path, domains: &[String], common: &Common) -> Res<Status> {
    let f = read_poly(path)?;
    let omega = parse_product(domains, f.nvars())?;
    let verdict = lib(find_zero(&f, &omega, &oracle(common)))?;
    let (exact, roots) = if f.nvars() == 1 {
        let exact = lib(is_stable_exact_univariate(&f, &omega.domains()[0], BoundaryPolicy::default()))?;
        (Some(exact), Some(lib(univariate_roots(&f))?))
    } else {
        (None, None)
    };
    println!("stability: {}", describe(&verdict));
    if let Some(e) = exact {
        println!("univariate root check: {}", if e { "stable" } else { "not stable" });
    }
    if let Some(r) = &roots {
        emit_csv(common, r)?;
    }
    let pass = verdict.is_no_zero() && exact.unwrap_or(true);
    emit(common, &StabilityReport { poly: f, domains: omega.domains().to_vec(), seed: common.seed, verdict, exact, roots })?;
    Ok(status(pass))
}

#[derive(Serialize)]
struct SymbolOutput {
    kind: &'static str,
    kappa: Vec<u32>,
    symbol: MultiPoly,
    display: String,
}

pub fn symbol(
    source: &OperatorSource,
    kappa: Option<&str>,
    kind: SymbolChoice,
    domains: &[String],
    order: u32,
    common: &Common,
) -> Res<Status> {
    let (t, kappa) = operator(source, kappa)?;
    let n = t.nvars_in();
    let (name, sym) = match kind {
        SymbolChoice::Halfplane => ("algebraic_halfplane", lib(algebraic_symbol_halfplane(&t, &kappa))?),
        SymbolChoice::Disc => ("algebraic_disc", lib(algebraic_symbol_disc(&t, &kappa))?),
        SymbolChoice::General => {
            if domains.is_empty() {
                return Err("the general symbol needs --domain".into());
            }
            let maps: Vec<_> = parse_product(domains, n)?.domains().iter().map(CircularDomain::to_upper_half_plane).collect();
            ("algebraic_general", lib(algebraic_symbol_general(&t, &kappa, &maps))?)
        }
        SymbolChoice::TranscendentalMinus => {
            ("transcendental_minus", lib(transcendental_symbol_truncated(&t, SymbolSign::Minus, order))?)
        }
        SymbolChoice::TranscendentalPlus => {
            ("transcendental_plus", lib(transcendental_symbol_truncated(&t, SymbolSign::Plus, order))?)
        }
    };
    let display = sym.display_with(&symbol_names(n));
    println!("{name} symbol, kappa = {:?}:", kappa.as_slice());
    println!("{display}");
    emit(common, &SymbolOutput { kind: name, kappa: kappa.into_vec(), symbol: sym, display })?;
    Ok(Status::Pass)
}

pub fn classify(
    source: &OperatorSource,
    kappa: Option<&str>,
    domains: &[String],
    ladder: bool,
    common: &Common,
) -> Res<Status> {
    let cfg = oracle(common);
    if ladder {
        let spec = source.builtin.as_deref().ok_or("--ladder needs --builtin")?;
        let n = match kappa {
            Some(k) => parse_kappa(k)?.len(),
            None if domains.len() > 1 => domains.len(),
            None => return Err("--ladder needs --kappa or one --domain per variable to fix the variable count".into()),
        };
        let omega = parse_product(domains, n)?;
        let report = lib(classify_ladder(builtin_builder(spec)?, &omega, &LADDER, &cfg))?;
        for rung in &report.rungs {
            println!(
                "kappa {:?}: {}",
                rung.kappa,
                if rung.report.evidence_positive { "evidence of preservation" } else { "no evidence" }
            );
        }
        println!("ladder: {}", if report.all_positive { "all rungs positive" } else { "not all rungs positive" });
        emit(common, &report)?;
        return Ok(status(report.all_positive));
    }
    let (t, kappa) = operator(source, kappa)?;
    let omega = parse_product(domains, t.nvars_in())?;
    let report = lib(classify_preserver_evidence(&t, &kappa, &omega, None, &cfg))?;
    println!("symbol ({:?}):", report.symbol_kind);
    println!("{}", report.symbol.display_with(&symbol_names(t.nvars_in())));
    println!("range of dimension at most one: {}", report.rank_le_one);
    match &report.verdict {
        Some(v) => println!("symbol on the doubled domain: {}", describe(v)),
        None => println!("symbol is identically zero"),
    }
    println!(
        "verdict: {}",
        if report.evidence_positive {
            "evidence that the operator preserves stability"
        } else {
            "no evidence of preservation"
        }
    );
    emit(common, &report)?;
    Ok(status(report.evidence_positive))
}

#[derive(Serialize)]
struct MoebiusReport {
    from: CircularDomain,
    to: CircularDomain,
    map: [C64; 4],
    images: Vec<(C64, Option<C64>)>,
    transported: Option<MultiPoly>,
}

pub fn moebius(
    from: &str,
    to: &str,
    points: &[String],
    poly: Option<&Path>,
    kappa: Option<&str>,
    common: &Common,
) -> Res<Status> {
    let (from, to) = (parse_domain(from)?, parse_domain(to)?);
    let m = moebius_for(&from, &to);
    println!("map: z -> ({} z + {}) / ({} z + {})", complex(m.a), complex(m.b), complex(m.c), complex(m.d));
    let mut images = Vec::new();
    for p in points {
        let z = parse_point(p)?;
        let w = m.apply(z).ok();
        match w {
            Some(w) => println!("{} -> {}", complex(z), complex(w)),
            None => println!("{} is the pole", complex(z)),
        }
        images.push((z, w));
    }
    let transported = match poly {
        None => None,
        Some(path) => {
            let f = read_poly(path)?;
            let kappa = match kappa {
                Some(k) => parse_kappa(k)?,
                None => ExponentVector::from(f.degrees()),
            };
            let g = lib(phi_kappa(&f, &vec![m; f.nvars()], &kappa))?;
            println!("transported polynomial: {g}");
            Some(g)
        }
    };
    emit(common, &MoebiusReport { from, to, map: [m.a, m.b, m.c, m.d], images, transported })?;
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct ComposeReport {
    variant: &'static str,
    kappa: Vec<u32>,
    result: MultiPoly,
    form_discrepancy: f64,
    verdict: Option<StabilityVerdict>,
}

pub fn compose(f: &Path, g: &Path, kappa: &str, variant: Variant, domain: Option<&str>, common: &Common) -> Res<Status> {
    let (f, g, kappa) = (read_poly(f)?, read_poly(g)?, parse_kappa(kappa)?);
    let (name, out) = match variant {
        Variant::Halfplane => ("halfplane", lib(compose_halfplane_forms(&f, &g, &kappa))?),
        Variant::Disc => ("disc", lib(compose_disc_forms(&f, &g, &kappa))?),
    };
    let result = out.coefficient_form.clone();
    println!("composition: {}", result.display_with(&symbol_names(kappa.len())));
    println!("coefficient and derivative forms differ by {:.3e} (relative)", out.discrepancy());
    let verdict = match domain {
        Some(d) if !result.is_zero() => {
            let omega = DomainProduct::uniform(parse_domain(d)?, result.nvars());
            let v = lib(find_zero(&result, &omega, &oracle(common)))?;
            println!("stability: {}", describe(&v));
            Some(v)
        }
        Some(_) => {
            println!("stability: result is identically zero");
            None
        }
        None => None,
    };
    let pass = verdict.as_ref().is_none_or(StabilityVerdict::is_no_zero);
    emit(
        common,
        &ComposeReport { variant: name, kappa: kappa.into_vec(), result, form_discrepancy: out.discrepancy(), verdict },
    )?;
    Ok(status(pass))
}

#[derive(Clone, Copy)]
pub struct GraceSettings {
    pub sign: Sign,
    pub reading: Reading,
    pub tol: f64,
}

fn grace_config(settings: GraceSettings, oracle: OracleConfig) -> GraceConfig {
    GraceConfig {
        oracle,
        sign: match settings.sign {
            Sign::Constant => BracketSign::Constant,
            Sign::PerTerm => BracketSign::PerTerm,
        },
        reading: match settings.reading {
            Reading::FDegree => DegreeReading::FDegree,
            Reading::GDegree => DegreeReading::GDegree,
        },
        violation_tol: settings.tol,
    }
}

pub fn apolarity(
    f: &Path,
    g: &Path,
    kappa: &str,
    domains: &[String],
    domain_g: Option<&str>,
    settings: GraceSettings,
    common: &Common,
) -> Res<Status> {
    let (f, g, kappa) = (read_poly(f)?, read_poly(g)?, parse_kappa(kappa)?);
    let cfg = grace_config(settings, oracle(common));
    if domains.is_empty() {
        return Err("apolarity needs --domain".into());
    }
    let first = parse_domain(&domains[0])?;
    let report: GraceReport = if let CircularDomain::HalfPlane { .. } = first {
        if domains.len() != 1 {
            return Err("the half-plane form takes one --domain for f and optionally --domain-g".into());
        }
        let second = domain_g.map(parse_domain).transpose()?.unwrap_or(first);
        lib(grace_check_halfplane(&f, &g, &first, &second, &kappa, &cfg))?
    } else {
        if domain_g.is_some() {
            return Err("--domain-g applies to the half-plane form only".into());
        }
        let omega = parse_product(domains, f.nvars())?;
        lib(grace_check_disc(&f, &g, &omega, &kappa, &cfg))?
    };
    println!("bracket: {} (|bracket| / scale = {:.3e})", complex(report.bracket), report.abs_bracket / report.scale.max(f64::MIN_POSITIVE));
    for h in &report.hypotheses {
        println!("  {}: {} ({})", h.name, if h.verified { "verified" } else { "not verified" }, h.detail);
    }
    println!(
        "result: {}",
        if report.violation {
            "bracket vanishes although the hypotheses hold"
        } else if report.hypotheses_verified {
            "hypotheses hold and the bracket is nonzero"
        } else {
            "hypotheses not verified"
        }
    );
    emit(common, &report)?;
    Ok(status(!report.violation))
}

pub fn campaign(kind: CampaignChoice, pairs: usize, settings: GraceSettings, common: &Common) -> Res<Status> {
    let base = CampaignConfig::default();
    let oracle = OracleConfig { slices_per_variable: common.slices.min(base.grace.oracle.slices_per_variable), ..oracle(common) };
    let mut cfg = CampaignConfig { seed: common.seed, pairs, grace: grace_config(settings, oracle), ..base };
    match kind {
        CampaignChoice::DiscCentred => cfg.kind = CampaignKind::Disc,
        CampaignChoice::Disc => {
            cfg.kind = CampaignKind::Disc;
            cfg.centred = false;
        }
        CampaignChoice::HalfPlane => cfg.kind = CampaignKind::HalfPlane,
        CampaignChoice::HalfPlaneEqual => {
            cfg.kind = CampaignKind::HalfPlane;
            cfg.equal_half_planes = true;
        }
    }
    let report = lib(run_campaign(&cfg))?;
    println!(
        "campaign: {} pairs evaluated ({} attempts), {} violations, smallest |bracket| / scale {:.3e}",
        report.evaluated, report.attempts, report.violations, report.min_relative_bracket
    );
    println!(
        "tuned apolar pairs: {} attempted, {} admissible, {} meet every hypothesis",
        report.probe.attempted, report.probe.admissible, report.probe.confirmed_violations
    );
    emit(common, &report)?;
    Ok(status(report.passed()))
}

pub fn lee_yang(path: &Path, tol: f64, exterior: bool, common: &Common) -> Res<Status> {
    #[derive(Serialize)]
    struct Report {
        circle: circstab::statmech::LeeYangReport,
        exterior: Option<StabilityVerdict>,
    }
    let s: SpinSystem = read_json(path)?;
    let circle = lib(lee_yang_check(&s, tol))?;
    println!(
        "n = {}, ferromagnetic: {}, max | |root| - 1 | = {:.3e} (tolerance {:.1e})",
        circle.n, circle.ferromagnetic, circle.max_deviation, tol
    );
    let exterior = if exterior {
        let v = lib(lee_yang_exterior_check(&s, &oracle(common)))?;
        println!("exterior search: {}", describe(&v));
        Some(v)
    } else {
        None
    };
    emit_csv(common, &circle.roots)?;
    let pass = circle.pass && exterior.as_ref().is_none_or(StabilityVerdict::is_no_zero);
    println!("result: {}", if pass { "pass" } else { "fail" });
    emit(common, &Report { circle, exterior })?;
    Ok(status(pass))
}

pub fn matching(path: &Path, tol: f64, common: &Common) -> Res<Status> {
    #[derive(Serialize)]
    struct Report {
        matching_polynomial: MultiPoly,
        #[serde(flatten)]
        check: circstab::statmech::HeilmannLiebReport,
    }
    let g: WeightedGraph = read_json(path)?;
    let poly = lib(heilmann_lieb_poly(&g))?;
    let check = lib(heilmann_lieb_check(&g, tol, &oracle(common)))?;
    println!("matching polynomial: {poly}");
    if let Some(v) = &check.verdict {
        println!("right half-plane search: {}", describe(v));
    }
    println!("diagonal roots: max |Re| = {:.3e} (tolerance {:.1e})", check.max_real_part, tol);
    println!("result: {}", if check.pass { "pass" } else { "fail" });
    emit_csv(common, &check.diagonal_roots)?;
    let pass = check.pass;
    emit(common, &Report { matching_polynomial: poly, check })?;
    Ok(status(pass))
}

pub fn circle(path: &Path, common: &Common) -> Res<Status> {
    let a: CircleCouplings = read_json(path)?;
    let report = lib(circle_theorem_check(&a, &oracle(common)))?;
    println!("product: {}", report.product);
    println!("unit polydisc search: {}", describe(&report.verdict));
    println!("result: {}", if report.pass { "pass" } else { "fail" });
    emit(common, &report)?;
    Ok(status(report.pass))
}
