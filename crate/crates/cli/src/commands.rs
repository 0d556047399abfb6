//! Subcommand bodies. Each returns an [`Outcome`]; `main` only prints it.

use std::path::Path;

use ffdioph_core::algebra::{parse_laurent, parse_rational, Field, Laurent, LaurentMat, LaurentVec};
use ffdioph_core::diophantine::{
    best_profile, cf_expand, check_cf_identities, dirichlet_solve, omega_estimate, validate_solution, DirichletInstance,
};
use ffdioph_core::goodmaps::{good_constants, nonplanarity_check, BallSpec, PolyMap};
use ffdioph_core::polylattice::MatrixFile;
use ffdioph_core::qpow::QPow;
use ffdioph_core::transference::{check_bz, check_dyson, verify_contraction, verify_intersection, SetFamily, SetFamilyConfig};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};
use crate::extremal::run_extremal;
use crate::CliError;

/// Report plus whether it records a violation (exit code 1).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub csv: String,
    pub violation: bool,
}

impl Outcome {
    fn new<T: Serialize>(report: &T, csv: String, violation: bool) -> Result<Outcome, CliError> {
        let json = serde_json::to_value(report).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(Outcome { json, csv, violation })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json value");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.violation)
    }
}

pub fn field(q: u32, modulus: Option<&str>) -> Result<Field, CliError> {
    Ok(match modulus {
        Some(m) => {
            let coeffs = m
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad modulus '{m}'"))))
                .collect::<Result<Vec<_>, _>>()?;
            let p = (2..=q).find(|p| q.is_multiple_of(*p)).unwrap_or(q);
            Field::extension(p, coeffs)?
        }
        None => Field::builtin(q)?,
    })
}

/// A Laurent literal, or a quotient `(A)/(B)` expanded to `floor`.
pub fn value(text: &str, f: &Field, floor: i64) -> Result<Laurent, CliError> {
    match parse_laurent(text, f) {
        Ok(v) => Ok(v),
        Err(e) => match parse_rational(text, f) {
            Ok(r) => Ok(Laurent::from_rational(&r, floor)?),
            Err(_) => Err(e.into()),
        },
    }
}

pub fn rational(text: &str) -> Result<BigRational, CliError> {
    text.trim().parse::<BigRational>().map_err(|_| CliError::Usage(format!("bad rational '{text}'")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// A matrix file, or rows separated by `;` with entries separated by `|`.
pub fn matrix(text: &str, f: &Field, floor: i64) -> Result<LaurentMat, CliError> {
    let p = Path::new(text);
    if p.is_file() {
        let mf = MatrixFile::parse(&read(p)?)?;
        if &mf.field != f {
            return Err(CliError::Usage(format!("matrix file is over q = {}", mf.field.q())));
        }
        return Ok(LaurentMat::from_rows(mf.entries)?);
    }
    let rows = text
        .split(';')
        .map(|r| r.split('|').map(|e| value(e.trim(), f, floor)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LaurentMat::from_rows(rows)?)
}

pub fn vector(text: &str, f: &Field, floor: i64) -> Result<LaurentVec, CliError> {
    Ok(LaurentVec(text.split(';').map(|e| value(e.trim(), f, floor)).collect::<Result<_, _>>()?))
}

pub fn cfrac(f: &Field, y: &str, max_terms: usize, floor: i64) -> Result<Outcome, CliError> {
    let y = value(y, f, floor)?;
    let cf = cf_expand(&y, max_terms);
    let check = check_cf_identities(&y, &cf);
    let mut csv = String::from("k,a_k,p_k,q_k\n");
    for (k, (a, (p, q))) in cf.partial_quotients.iter().zip(&cf.convergents).enumerate() {
        csv.push_str(&format!("{k},{a},{p},{q}\n"));
    }
    let report = json!({
        "y": y.to_string(),
        "expansion": cf,
        "identities_ok": check.is_ok(),
        "identity_error": check.as_ref().err(),
    });
    Outcome::new(&report, csv, check.is_err())
}

pub fn exponent(f: &Field, y: &str, theta: Option<&str>, tau_max: u32, floor: i64) -> Result<Outcome, CliError> {
    let y = matrix(y, f, floor)?;
    let theta = theta.map(|t| vector(t, f, floor)).transpose()?;
    let profile = best_profile(&y, theta.as_ref(), tau_max)?;
    let est = omega_estimate(&profile, profile.m, profile.n, (tau_max / 2).max(1)).ok();
    let csv = profile.to_csv();
    Outcome::new(&json!({ "profile": profile, "estimate": est }), csv, false)
}

/// Instance file: a matrix file whose `shift` holds the weights `t`.
pub fn dirichlet(path: &Path) -> Result<Outcome, CliError> {
    let mf = MatrixFile::parse(&read(path)?)?;
    let y = LaurentMat::from_rows(mf.entries)?;
    let inst = DirichletInstance::new(y, mf.shift)?;
    let sol = dirichlet_solve(&inst)?;
    let check = validate_solution(&inst, &sol.p, &sol.q);
    let join = |v: &[ffdioph_core::algebra::Poly]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
    let csv = format!("p,q,ok\n{},{},{}\n", join(&sol.p), join(&sol.q), check.ok);
    Outcome::new(&json!({ "weights": inst.t, "solution": sol, "valid": check.ok }), csv, !check.ok)
}

pub struct GoodArgs<'a> {
    pub map: &'a Path,
    pub kappa: BigRational,
    pub res: u32,
    pub radius: i64,
    pub c: Option<BigRational>,
    pub trials: u32,
    pub seed: Option<u64>,
}

/// Least good constants of every coordinate `f_i` on the ball, plus an
/// optional randomized nonplanarity search.
pub fn goodcheck(a: &GoodArgs) -> Result<Outcome, CliError> {
    let map = PolyMap::parse(&read(a.map)?)?;
    let f = map.field.clone();
    let ball = BallSpec { center: vec![Vec::new(); map.d], radius_exp: a.radius };
    let mut comps = Vec::new();
    let mut csv = String::from("component,depth,measure,ratio\n");
    let mut violation = false;
    for i in 0..map.n() {
        let mut combo = vec![Laurent::zero(&f); map.n() + 1];
        combo[i + 1] = Laurent::one(&f);
        let rep = good_constants(&map, &combo, &ball, a.res, &a.kappa)?;
        for l in &rep.levels {
            csv.push_str(&format!("{},{},{},{}\n", i + 1, l.depth, l.measure, l.ratio));
        }
        let bad = a.c.as_ref().map(|c| rep.violations(&QPow::rational(f.q(), c.clone()))).unwrap_or_default();
        violation |= !bad.is_empty();
        comps.push(json!({ "component": i + 1, "report": rep, "violating_depths": bad }));
    }
    let planar = if a.trials > 0 {
        let seed = a.seed.ok_or_else(|| CliError::Usage("--seed is required with --nonplanar-trials".into()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Some(nonplanarity_check(&map, &ball, a.trials, &mut rng)?)
    } else {
        None
    };
    Outcome::new(&json!({ "ball": ball, "components": comps, "nonplanarity": planar }), csv, violation)
}

pub fn bz(f: &Field, x: &str, theta: &str, tau_max: u32, tol: &BigRational, floor: i64) -> Result<Outcome, CliError> {
    let x = matrix(x, f, floor)?;
    let theta = vector(theta, f, floor)?;
    let rep = check_bz(&x, &theta, tau_max, tol)?;
    let mut csv = String::from("check,lhs,rhs,status\n");
    for c in &rep.checks {
        let s = |e: &Option<_>| e.as_ref().map_or("-".to_string(), |e: &ffdioph_core::diophantine::Exponent| e.to_string());
        csv.push_str(&format!("{},{},{},{:?}\n", c.name, s(&c.lhs), s(&c.rhs), c.status));
    }
    Outcome::new(&rep, csv, rep.violated())
}

pub fn dyson(f: &Field, y: &str, tau_max: u32, floor: i64) -> Result<Outcome, CliError> {
    let y = vector(y, f, floor)?;
    let rep = check_dyson(&y, tau_max)?;
    let csv = format!(
        "side,at_tau_max,is_one\ncolumn,{},{}\nrow,{},{}\nstatus,{:?},\n",
        rep.column.at_tau_max, rep.column.is_one, rep.row.at_tau_max, rep.row.is_one, rep.status
    );
    Outcome::new(&rep, csv, rep.violated())
}

pub struct FamilyArgs<'a> {
    pub field: Field,
    /// `None` for the Veronese curve with `n` coordinates.
    pub map: Option<&'a Path>,
    pub n: usize,
    pub theta: &'a str,
    pub omega: BigRational,
    pub t: u32,
    pub res: u32,
    pub v_radius: i64,
    pub c: BigRational,
    pub kappa: BigRational,
}

fn family(a: &FamilyArgs) -> Result<SetFamily, CliError> {
    let map = match a.map {
        Some(p) => PolyMap::parse(&read(p)?)?,
        None => PolyMap::veronese(&a.field, a.n),
    };
    let theta = parse_laurent(a.theta, &map.field)?;
    let q = map.field.q();
    let v = BallSpec { center: vec![Vec::new(); map.d], radius_exp: a.v_radius };
    Ok(SetFamily::new(SetFamilyConfig {
        f: map,
        v,
        theta,
        omega: a.omega.clone(),
        t: a.t,
        res: a.res,
        good_c: QPow::rational(q, a.c.clone()),
        kappa: a.kappa.clone(),
    })?)
}

fn violations_csv(v: &[ffdioph_core::transference::Violation]) -> String {
    let mut csv = String::from("check,indices,cell,detail\n");
    for x in v {
        csv.push_str(&format!("{},{},{},{}\n", x.check, x.indices.join(" / "), x.cell, x.detail));
    }
    csv
}

pub fn intersection(a: &FamilyArgs) -> Result<Outcome, CliError> {
    let rep = verify_intersection(&family(a)?)?;
    Outcome::new(&rep, violations_csv(&rep.violations), !rep.passed())
}

pub fn contraction(a: &FamilyArgs) -> Result<Outcome, CliError> {
    let rep = verify_contraction(&family(a)?)?;
    Outcome::new(&rep, violations_csv(&rep.violations), !rep.passed())
}

pub fn extremal(path: &Path, seed: Option<u64>, format: Option<Format>) -> Result<(Outcome, Format), CliError> {
    let mut text = read(path)?;
    if let Some(s) = seed {
        text.push_str(&format!("\nseed = {s}\n"));
    }
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(f) = format {
        cfg.format = f;
    }
    let rep = run_extremal(&cfg)?;
    Ok((Outcome::new(&rep, rep.quantiles_csv(), false)?, cfg.format))
}
