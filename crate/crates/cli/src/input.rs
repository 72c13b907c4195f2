use std::fs;
use std::path::Path;

use circstab::domains::{CircularDomain, DomainProduct};
use circstab::operators::builtin;
use circstab::operators::{LinearOperator, OperatorJson};
use circstab::{ExponentVector, MultiPoly, C64};
use serde::de::DeserializeOwned;

use crate::OperatorSource;

pub type Res<T> = std::result::Result<T, String>;

pub fn lib<T>(r: circstab::Result<T>) -> Res<T> {
    r.map_err(|e| e.to_string())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Res<T> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_poly(path: &Path) -> Res<MultiPoly> {
    read_json(path)
}

fn numbers(s: &str, what: &str) -> Res<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| format!("malformed {what} {s:?}"))
}

/// `halfplane:θ`, `disc`, `disc:re,im,r`, `exterior`, `exterior:re,im,r`.
pub fn parse_domain(s: &str) -> Res<CircularDomain> {
    let (kind, params) = match s.split_once(':') {
        Some((k, p)) => (k, Some(p)),
        None => (s, None),
    };
    let circle = |p: Option<&str>| -> Res<(C64, f64)> {
        match p {
            None => Ok((C64::new(0.0, 0.0), 1.0)),
            Some(p) => match numbers(p, "disc parameters")?.as_slice() {
                &[re, im, r] => Ok((C64::new(re, im), r)),
                _ => Err(format!("disc parameters must be RE,IM,RADIUS, got {p:?}")),
            },
        }
    };
    let d = match kind {
        "halfplane" | "half-plane" => {
            let theta = match params {
                None => 0.0,
                Some(p) => match numbers(p, "angle")?.as_slice() {
                    &[t] => t,
                    _ => return Err(format!("half-plane takes one angle, got {p:?}")),
                },
            };
            CircularDomain::half_plane(theta)
        }
        "disc" => {
            let (center, radius) = circle(params)?;
            CircularDomain::Disc { center, radius }
        }
        "exterior" => {
            let (center, radius) = circle(params)?;
            CircularDomain::DiscExterior { center, radius }
        }
        _ => return Err(format!("unknown domain {s:?} (expected halfplane:THETA, disc or exterior)")),
    };
    lib(d.validate())?;
    Ok(d)
}

/// One domain for every variable, or exactly `n` of them.
pub fn parse_product(specs: &[String], n: usize) -> Res<DomainProduct> {
    let doms = specs.iter().map(|s| parse_domain(s)).collect::<Res<Vec<_>>>()?;
    match doms.len() {
        1 => Ok(DomainProduct::uniform(doms[0], n)),
        k if k == n => lib(DomainProduct::new(doms)),
        k => Err(format!("{k} domains given for {n} variables")),
    }
}

pub fn parse_kappa(s: &str) -> Res<ExponentVector> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().ok())
        .collect::<Option<Vec<_>>>()
        .map(ExponentVector::from)
        .ok_or_else(|| format!("malformed multi-index {s:?}"))
}

pub fn parse_point(s: &str) -> Res<C64> {
    match numbers(s, "point")?.as_slice() {
        &[re, im] => Ok(C64::new(re, im)),
        _ => Err(format!("point must be RE,IM, got {s:?}")),
    }
}

fn index(s: &str, n: usize) -> Res<usize> {
    match s.trim().parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(format!("variable index {s:?} must be between 1 and {n}")),
    }
}

/// Builds the named built-in on a given truncation.
pub fn builtin_builder(spec: &str) -> Res<impl Fn(&ExponentVector) -> circstab::Result<LinearOperator>> {
    let (name, params) = match spec.split_once(':') {
        Some((n, p)) => (n.to_string(), p.split(',').map(str::to_string).collect::<Vec<_>>()),
        None => (spec.to_string(), Vec::new()),
    };
    let arity = match name.as_str() {
        "identity" | "map" | "lieb-sokal" => 0,
        "derivative" => 1,
        "asano" => 2,
        "edge" => 3,
        "scaling" => params.len().max(1),
        _ => return Err(format!("unknown built-in operator {name:?}")),
    };
    if params.len() != arity {
        return Err(format!("built-in {name:?} takes {arity} parameter(s), got {}", params.len()));
    }
    if name == "scaling" {
        numbers(&params.join(","), "scaling factors")?;
    }
    if name == "edge" {
        numbers(&params[2], "coupling")?;
    }
    Ok(move |kappa: &ExponentVector| {
        let n = kappa.len();
        let idx = |s: &str| index(s, n).map_err(circstab::Error::InvalidInput);
        match name.as_str() {
            "identity" => builtin::identity(kappa),
            "map" => builtin::map_operator(kappa),
            "lieb-sokal" => builtin::lieb_sokal(kappa),
            "derivative" => builtin::derivative(idx(&params[0])?, kappa),
            "asano" => builtin::asano(idx(&params[0])?, idx(&params[1])?, kappa),
            "edge" => {
                let j: f64 = params[2].trim().parse().expect("checked above");
                builtin::lee_yang_edge(idx(&params[0])?, idx(&params[1])?, j, kappa)
            }
            _ => {
                let s: Vec<C64> = params.iter().map(|x| C64::new(x.trim().parse().expect("checked above"), 0.0)).collect();
                builtin::scaling(&s, kappa)
            }
        }
    })
}

/// The operator and its input truncation.
pub fn operator(source: &OperatorSource, kappa: Option<&str>) -> Res<(LinearOperator, ExponentVector)> {
    let requested = kappa.map(parse_kappa).transpose()?;
    if let Some(path) = &source.op {
        let json: OperatorJson = read_json(path)?;
        let t = lib(LinearOperator::from_json(&json)).map_err(|e| format!("{}: {e}", path.display()))?;
        let kappa = match requested {
            Some(k) if &k != t.kappa_in() => {
                return Err(format!("--kappa {:?} differs from the operator's {:?}", k.as_slice(), t.kappa_in().as_slice()))
            }
            _ => t.kappa_in().clone(),
        };
        return Ok((t, kappa));
    }
    let spec = source.builtin.as_deref().expect("clap requires one source");
    let kappa = requested.ok_or("built-in operators need --kappa")?;
    let t = lib(builtin_builder(spec)?(&kappa))?;
    Ok((t, kappa))
}
