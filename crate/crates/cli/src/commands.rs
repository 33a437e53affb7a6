//! One function per subcommand. Each returns a report and an exit status;
//! operational failures come back as library errors.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use folia::catalog::{self, CensusFamily, LieFamily, WeightVector};
use folia::exterior::json::FormJson;
use folia::exterior::random_descending_form;
use folia::foliation::json::MapJson;
use folia::foliation::{logarithmic_form, make_foliation, Foliation, RationalMapLift};
use folia::groebner::{codimension, coefficient_ideal, kupka_report};
use folia::report::Report;
use folia::ring::json::parse_rational;
use folia::rng::{generator, nonzero_int, Generator};
use folia::tangent::{form_space, tangent_space_in, verify_main_theorem, VerifyOptions};
use folia::{DiffForm, Error, Poly, Rational, Result, WeightedRing};
use serde_json::{json, Value};

use crate::{Common, Outcome, EXIT_BUDGET, EXIT_OK, EXIT_VERDICT};

/// Redraws allowed when random inputs fail hypothesis certification.
const MAX_REDRAWS: u64 = 16;

#[derive(Args, Debug)]
pub struct FormArg {
    /// form file, or a report produced by `pullback`
    pub form: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub form: PathBuf,
}

#[derive(Args, Debug)]
pub struct PullbackArgs {
    #[arg(long)]
    pub form: PathBuf,
    /// map file; a random map is drawn from the seed when absent
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// source dimension of a random map
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: i64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long)]
    pub delta: Option<i64>,
    #[arg(long, default_value_t = 1)]
    pub k: i64,
    #[arg(long, default_value = "generic", value_parser = ["generic", "log"])]
    pub family: String,
    /// residues of the logarithmic form, comma separated rationals
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub alpha: Option<PathBuf>,
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GoodDegreesArgs {
    #[arg(long)]
    pub weights: String,
    #[arg(long)]
    pub min: Option<i64>,
    #[arg(long)]
    pub max: i64,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub k: i64,
    /// all, pb, log, E, aff, g(m), g6 or g7
    #[arg(long, default_value = "all")]
    pub family: String,
    /// weights of the target plane (pb) or space (log)
    #[arg(long, default_value = "1,1,1")]
    pub weights: String,
    /// degree on the target plane (pb); defaults to the smallest good degree
    #[arg(long)]
    pub l: Option<i64>,
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Accepts a bare payload or a report carrying it under `output.<key>`.
fn payload<'a>(v: &'a Value, marker: &str, key: &str) -> Result<&'a Value> {
    if v.get(marker).is_some() {
        return Ok(v);
    }
    v.get("output")
        .and_then(|o| o.get(key))
        .ok_or_else(|| Error::Input(format!("no {key} found in input")))
}

fn load_form(path: &Path) -> Result<(DiffForm, Value)> {
    let v = read_json(path)?;
    let p = payload(&v, "components", "form")?.clone();
    let fj: FormJson = serde_json::from_value(p.clone()).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok((fj.to_form()?, p))
}

fn load_map(path: &Path) -> Result<(RationalMapLift, Value)> {
    let v = read_json(path)?;
    let p = payload(&v, "polys", "map")?.clone();
    let mj: MapJson = serde_json::from_value(p.clone()).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    Ok((mj.to_map()?, p))
}

fn form_json(w: &DiffForm) -> Value {
    serde_json::to_value(FormJson::from_form(w)).expect("forms serialize")
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn common_inputs(c: &Common) -> Value {
    json!({
        "coef_bound": c.coef_bound,
        "gb_pair_budget": c.gb_pair_budget,
        "gb_degree_cap": c.gb_degree_cap,
    })
}

fn with_inputs(c: &Common, command: &str, extra: Value) -> Value {
    let mut v = common_inputs(c);
    let obj = v.as_object_mut().expect("object");
    obj.insert("command".into(), json!(command));
    if let Value::Object(e) = extra {
        obj.extend(e);
    }
    v
}

fn status(ok: bool) -> u8 {
    if ok {
        EXIT_OK
    } else {
        EXIT_VERDICT
    }
}

fn ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub fn check(c: &Common, a: &CheckArgs, start: Instant) -> Result<Outcome> {
    let (w, raw) = load_form(&a.form)?;
    if w.degree_p() != 1 {
        return Err(Error::Input(format!("expected a 1-form, got a {}-form", w.degree_p())));
    }
    let mut report = Report::new("check", &with_inputs(c, "check", json!({ "form": raw })), c.seed);
    let nonzero = !w.is_zero();
    let homogeneous = w.is_homogeneous();
    let descending = w.is_descending();
    let integrable = w.is_integrable();
    let degree = if nonzero && homogeneous { Some(w.weighted_degree()?) } else { None };
    let budget = c.budget(start);
    let (codim_sing, kupka) = if nonzero && homogeneous {
        let cs = codimension(&coefficient_ideal(&w)?, &budget)?;
        let kp = if descending && integrable { Some(kupka_report(&w, &budget)?) } else { None };
        (Some(cs), kp)
    } else {
        (None, None)
    };
    let foliation = nonzero && homogeneous && descending && integrable && codim_sing.is_some_and(|d| d >= 2);
    report.dims = json!({ "degree": degree, "codim_sing": codim_sing });
    report.certificates = json!({ "kupka": kupka });
    report.verdicts = json!({
        "nonzero": nonzero,
        "homogeneous": homogeneous,
        "descending": descending,
        "integrable": integrable,
        "codim_sing_at_least_2": codim_sing.is_some_and(|d| d >= 2),
        "foliation": foliation,
    });
    if c.timings {
        report.timings_ms = Some([("total".to_string(), ms(start))].into());
    }
    Ok(Outcome { report, status: status(foliation) })
}

pub fn pullback(c: &Common, a: &PullbackArgs) -> Result<Outcome> {
    let (alpha, raw_alpha) = load_form(&a.form)?;
    let (map, raw_map) = match &a.map {
        Some(p) => load_map(p)?,
        None => {
            let n = a.n.ok_or_else(|| Error::Input("give --map or --n for a random map".into()))?;
            let source = WeightedRing::standard(n + 1);
            let mut rng = generator(c.seed);
            let f = RationalMapLift::random(&source, alpha.ring(), a.k, &mut rng, c.coef_bound)?;
            let v = to_value(&MapJson::from_map(&f));
            (f, v)
        }
    };
    let inputs = with_inputs(c, "pullback", json!({ "form": raw_alpha, "map": raw_map, "n": a.n, "k": a.k }));
    let delta = alpha.weighted_degree()?;
    let omega = map.pullback(&alpha)?;
    let mut report = Report::new("pullback", &inputs, c.seed);
    let meta = json!({ "k": map.k(), "delta": delta, "k_delta": map.k() * delta });
    report.dims = meta.clone();
    report.verdicts = json!({ "nonzero": !omega.is_zero() });
    report.output = Some(json!({ "form": form_json(&omega), "map": raw_map, "metadata": meta }));
    Ok(Outcome { report, status: EXIT_OK })
}

pub fn tangent_dim(c: &Common, a: &FormArg, start: Instant) -> Result<Outcome> {
    let (w, raw) = load_form(&a.form)?;
    let mut report = Report::new("tangent-dim", &with_inputs(c, "tangent-dim", json!({ "form": raw })), c.seed);
    let fol = match make_foliation(&w) {
        Ok(f) => f,
        Err(e @ (Error::NotDescending | Error::NotIntegrable | Error::ZeroForm)) => {
            report.verdicts = json!({ "foliation": false, "reason": e.to_string() });
            return Ok(Outcome { report, status: EXIT_VERDICT });
        }
        Err(e) => return Err(e),
    };
    let space = form_space(fol.ring(), fol.delta());
    let t = tangent_space_in(&fol, &space)?;
    report.dims = json!({
        "ambient": space.ambient_dim(),
        "descending": space.dim(),
        "T_omega": t.dim(),
        "T_omega_projective": t.dim() as i64 - 1,
    });
    report.verdicts = json!({ "foliation": true });
    if c.timings {
        report.timings_ms = Some([("total".to_string(), ms(start))].into());
    }
    Ok(Outcome { report, status: EXIT_OK })
}

pub fn kupka(c: &Common, a: &FormArg, start: Instant) -> Result<Outcome> {
    let (w, raw) = load_form(&a.form)?;
    if w.is_zero() {
        return Err(Error::ZeroForm);
    }
    let r = kupka_report(&w, &c.budget(start))?;
    let mut report = Report::new("kupka", &with_inputs(c, "kupka", json!({ "form": raw })), c.seed);
    report.dims = json!({ "codim_sing": r.codim_sing, "codim_sing_plus_domega": r.codim_sing_plus_domega });
    report.certificates = to_value(&r);
    report.verdicts = json!({ "generically_kupka": r.generically_kupka });
    if c.timings {
        report.timings_ms = Some([("total".to_string(), ms(start))].into());
    }
    Ok(Outcome { report, status: status(r.generically_kupka) })
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(|t| parse_rational(t.trim())).collect()
}

/// Residues with `sum lambda_i e_i = 0`, all nonzero.
fn random_residues(ring: &WeightedRing, rng: &mut Generator, bound: u32) -> Vec<Rational> {
    let m = ring.nvars() - 1;
    loop {
        let mut lambda: Vec<Rational> = (0..m).map(|_| Rational::from_integer(nonzero_int(rng, bound).into())).collect();
        let s: Rational = lambda
            .iter()
            .enumerate()
            .map(|(i, l)| l * Rational::from_integer((ring.weight(i) as i64).into()))
            .sum();
        let last = -s / Rational::from_integer((ring.weight(m) as i64).into());
        if last != Rational::from_integer(0.into()) {
            lambda.push(last);
            return lambda;
        }
    }
}

struct VerifyPlan {
    target: WeightedRing,
    source: Option<WeightedRing>,
    delta: Option<i64>,
    k: i64,
    family: String,
    lambda: Option<Vec<Rational>>,
    alpha: Option<Foliation>,
    map: Option<RationalMapLift>,
}

impl VerifyPlan {
    fn draw_alpha(&self, rng: &mut Generator, bound: u32) -> Result<(Foliation, Option<Vec<i64>>)> {
        if let Some(a) = &self.alpha {
            return Ok((a.clone(), None));
        }
        let m = self.target.nvars() - 1;
        match self.family.as_str() {
            "log" => {
                let lambda = match &self.lambda {
                    Some(l) => l.clone(),
                    None => random_residues(&self.target, rng, bound),
                };
                let f: Vec<Poly> = (0..=m).map(|i| Poly::var(&self.target, i)).collect();
                // the diagonal fields annihilating the form have degree zero
                Ok((logarithmic_form(&f, &lambda)?, Some(vec![0; m - 1])))
            }
            _ => {
                let delta = self.delta.expect("checked");
                let w = random_descending_form(&self.target, 1, delta, rng, bound);
                Ok((make_foliation(&w)?, None))
            }
        }
    }

    fn draw_map(&self, rng: &mut Generator, bound: u32) -> Result<RationalMapLift> {
        match (&self.map, &self.source) {
            (Some(f), _) => Ok(f.clone()),
            (None, Some(s)) => RationalMapLift::random(s, &self.target, self.k, rng, bound),
            (None, None) => Err(Error::Input("give --n or --map".into())),
        }
    }
}

pub fn verify_main(c: &Common, a: &VerifyArgs, start: Instant) -> Result<Outcome> {
    let mut inputs = json!({
        "n": a.n, "m": a.m, "weights": a.weights, "delta": a.delta, "k": a.k,
        "family": a.family, "lambda": a.lambda,
    });
    let (alpha, raw_alpha) = match &a.alpha {
        Some(p) => {
            let (w, raw) = load_form(p)?;
            (Some(make_foliation(&w)?), raw)
        }
        None => (None, Value::Null),
    };
    let (map, raw_map) = match &a.map {
        Some(p) => {
            let (f, raw) = load_map(p)?;
            (Some(f), raw)
        }
        None => (None, Value::Null),
    };
    inputs["alpha"] = raw_alpha;
    inputs["map"] = raw_map;
    let inputs = with_inputs(c, "verify-main", inputs);

    let target = match (&alpha, &map, &a.weights) {
        (Some(f), _, _) => f.ring().clone(),
        (None, Some(f), _) => f.target().clone(),
        (None, None, Some(w)) => WeightedRing::new(w.parse::<WeightVector>()?.0)?,
        (None, None, None) => WeightedRing::standard(a.m.unwrap_or(2) + 1),
    };
    let m = target.nvars() - 1;
    if let Some(mm) = a.m {
        if mm != m {
            return Err(Error::Input(format!("--m {mm} does not match {} target weights", m + 1)));
        }
    }
    let n = match (&map, a.n) {
        (Some(f), _) => f.source().nvars() - 1,
        (None, Some(n)) => n,
        (None, None) => return Err(Error::Input("give --n or --map".into())),
    };
    if n < m + 2 {
        return Err(Error::Ambient(format!("n = {n} is below m + 2 = {}", m + 2)));
    }
    let lambda = a.lambda.as_deref().map(parse_rationals).transpose()?;
    if alpha.is_none() {
        match a.family.as_str() {
            "log" => {
                if let Some(d) = a.delta {
                    if d != target.weight_sum() {
                        return Err(Error::Input(format!(
                            "the logarithmic form on coordinate hyperplanes has degree {}, not {d}",
                            target.weight_sum()
                        )));
                    }
                }
                if m < 2 {
                    return Err(Error::Input("the logarithmic family needs m >= 2".into()));
                }
            }
            _ => {
                if m != 2 {
                    return Err(Error::Input("generic 1-forms are integrable only for m = 2; use --family log".into()));
                }
                if a.delta.is_none() {
                    return Err(Error::Input("--delta is required".into()));
                }
            }
        }
    }
    let plan = VerifyPlan {
        target: target.clone(),
        source: Some(WeightedRing::standard(n + 1)),
        delta: a.delta,
        k: a.k,
        family: a.family.clone(),
        lambda,
        alpha,
        map,
    };
    let random_inputs = plan.alpha.is_none() || plan.map.is_none();

    let mut attempt = 0;
    let (result, timings, seed_used) = loop {
        let seed = c.seed + attempt;
        let mut rng = generator(seed);
        let (alpha, split) = plan.draw_alpha(&mut rng, c.coef_bound)?;
        let f = plan.draw_map(&mut rng, c.coef_bound)?;
        let opts = VerifyOptions { budget: c.budget(start), split_field_degrees: split };
        let (r, t) = verify_main_theorem(&f, &alpha, &opts)?;
        attempt += 1;
        if r.hypotheses_met || !random_inputs || attempt >= MAX_REDRAWS || c.over_time(start) {
            break (r, t, seed);
        }
    };

    let mut report = Report::new("verify-main", &inputs, c.seed);
    report.dims = to_value(&result.dims);
    report.certificates = to_value(&result.certificates);
    report.verdicts = json!({
        "decomposes": result.decomposes,
        "hypotheses_met": result.hypotheses_met,
        "pullback_in_tangent": result.pullback_in_tangent,
        "unfolding_in_tangent": result.unfolding_in_tangent,
        "attempts": attempt,
        "seed_used": seed_used,
    });
    report.output = Some(json!({
        "n": result.n, "m": result.m, "k": result.k, "delta": result.delta,
        "pullback_degree": result.pullback_degree, "target_weights": result.target_weights,
    }));
    if c.timings {
        let mut t = timings;
        t.insert("total".into(), ms(start));
        report.timings_ms = Some(t);
    }
    let code = if random_inputs && !result.hypotheses_met {
        EXIT_BUDGET
    } else {
        status(result.decomposes)
    };
    Ok(Outcome { report, status: code })
}

pub fn good_degrees(c: &Common, a: &GoodDegreesArgs) -> Result<Outcome> {
    let e: WeightVector = a.weights.parse()?;
    let lo = a.min.unwrap_or_else(|| e.sum());
    let rows = catalog::good_degrees(&e, lo, a.max)?;
    let inputs = with_inputs(c, "good-degrees", json!({ "weights": e.0, "min": lo, "max": a.max }));
    let mut report = Report::new("good-degrees", &inputs, c.seed);
    report.dims = json!({ "count": rows.len(), "period": e.product() });
    report.verdicts = json!({ "any": !rows.is_empty() });
    report.table = Some(rows.iter().map(to_value).collect());
    Ok(Outcome { report, status: EXIT_OK })
}

fn census_families(a: &CensusArgs) -> Result<Vec<CensusFamily>> {
    let weights: WeightVector = a.weights.parse()?;
    let pb = || -> Result<CensusFamily> {
        let l = match a.l {
            Some(l) => l,
            None => catalog::good_degrees(&weights, 0, weights.sum() + weights.product())?
                .first()
                .map(|g| g.delta)
                .ok_or_else(|| Error::Input("no good degree found".into()))?,
        };
        Ok(CensusFamily::PlanePullback { weights: weights.clone(), l })
    };
    match a.family.to_ascii_lowercase().as_str() {
        "pb" => Ok(vec![pb()?]),
        "log" => Ok(vec![CensusFamily::Log { weights }]),
        "e" => Ok(vec![CensusFamily::Exceptional]),
        "all" => {
            let mut out = Vec::new();
            if weights.0.len() == 3 {
                out.push(pb()?);
            }
            out.push(CensusFamily::Log { weights: weights.clone() });
            out.push(CensusFamily::Exceptional);
            out.extend((3..=7).map(|m| CensusFamily::Lie(LieFamily::G(m))));
            out.push(CensusFamily::Lie(LieFamily::G6));
            out.push(CensusFamily::Lie(LieFamily::G7));
            Ok(out.into_iter().filter(|f| f.n_min() <= a.n).collect())
        }
        other => Ok(vec![CensusFamily::Lie(other.parse()?)]),
    }
}

pub fn census(c: &Common, a: &CensusArgs) -> Result<Outcome> {
    let families = census_families(a)?;
    let rows = families.iter().map(|f| catalog::component_census(a.n, a.k, f)).collect::<Result<Vec<_>>>()?;
    let inputs = with_inputs(
        c,
        "census",
        json!({ "n": a.n, "k": a.k, "family": a.family, "weights": a.weights, "l": a.l }),
    );
    let all_ok = rows.iter().all(|r| r.status.starts_with("ok"));
    let mut report = Report::new("census", &inputs, c.seed);
    report.dims = json!({ "rows": rows.len() });
    report.verdicts = json!({ "all_ok": all_ok });
    report.table = Some(rows.iter().map(to_value).collect());
    Ok(Outcome { report, status: status(all_ok) })
}
