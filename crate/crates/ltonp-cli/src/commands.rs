//! Subcommand implementations. Each returns a JSON document and whether the
//! run counts as a success for the exit code.

use crate::io::{matrix_json, parameter_json, system_json, ProblemFile};
use anyhow::Result;
use ltonp::complementary::{complementary_pair, verify_pair, ComplementaryPair};
use ltonp::fronts::{commutant_lifting_instance, leech_residual, leech_truncate, LeechInstance, COISOMETRY_TOL};
use ltonp::kernel::{hermitian_part, min_hermitian_eigenvalue};
use ltonp::problem::{gramians, PickData, ProblemData, STEIN_TOL};
use ltonp::sample::{random_contraction, random_instance, random_instance_with_dims};
use ltonp::solver::{central_solution, coefficient_system, lft_solution, CoefficientSystem, SchurParameter};
use ltonp::verify::{
    disc_grid, entropy_central, entropy_of_solution, interpolation_residual, schur_margin, verify_solution,
    VerifyOptions, CIRCLE_POINTS, RADII,
};
use ltonp::RationalSystem;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Hermitian tolerance for `P^{±1/2}` in the complementary pair.
pub const PAIR_TOL: f64 = 1e-10;
/// Default entropy doubling tolerance.
pub const ENTROPY_TOL: f64 = 1e-10;
/// Starting truncation for entropy estimates.
pub const ENTROPY_START: usize = 16;

#[derive(Debug, Clone)]
pub struct Options {
    pub tol: f64,
    pub grid: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self { tol: 1e-8, grid: CIRCLE_POINTS, seed: 0 }
    }
}

struct Solved {
    prob: ProblemData,
    pick: PickData,
    pair: ComplementaryPair,
    coeffs: CoefficientSystem,
}

fn prepare(prob: ProblemData) -> Result<Solved> {
    let pick = gramians(&prob, STEIN_TOL)?;
    pick.require_lambda_positive()?;
    let pair = complementary_pair(&prob, &pick, PAIR_TOL)?;
    let coeffs = coefficient_system(&prob, &pick, &pair)?;
    Ok(Solved { prob, pick, pair, coeffs })
}

fn pick_json(pick: &PickData) -> Value {
    json!({
        "classification": pick.classification.label(),
        "lambda_min_eig": pick.classification.min_eig(),
        "posdef_tol": pick.posdef_tol,
        "P_min_eig": pick.p_min_eig,
        "P": matrix_json(&pick.p),
        "Ptilde": matrix_json(&pick.ptilde),
        "Lambda": matrix_json(&pick.lambda),
    })
}

fn grid(opts: &Options) -> Vec<ltonp::C64> {
    let mut g = ltonp::verify::circle_grid(opts.grid);
    g.extend(disc_grid(&RADII, (opts.grid / 2).max(1)));
    g
}

fn solution(s: &Solved, x: Option<&SchurParameter>) -> Result<RationalSystem> {
    Ok(match x {
        Some(x) => lft_solution(&s.coeffs, &s.prob, &s.pick, &s.pair, x)?,
        None => central_solution(&s.prob, &s.pick)?,
    })
}

pub fn solve(prob: ProblemData, x: Option<&SchurParameter>, opts: &Options) -> Result<(Value, bool)> {
    let s = prepare(prob)?;
    let f = solution(&s, x)?;
    let residual = interpolation_residual(&s.prob, &f, STEIN_TOL)?;
    let margin = schur_margin(&f, &grid(opts))?;
    let mut notes = vec!["E-indexed quantities are basis-dependent up to a left unitary factor".to_owned()];
    if let Some(cond) = s.coeffs.ill_conditioned {
        notes.push(format!("ill-conditioned Pick operator, cond = {cond:.3e}"));
    }
    let ok = residual <= opts.tol && margin <= opts.tol;
    Ok((
        json!({
            "pick": pick_json(&s.pick),
            "e": s.pair.e,
            "Q0": matrix_json(&s.coeffs.q0),
            "R0": matrix_json(&s.coeffs.r0),
            "parameter": x.map(parameter_json),
            "solution": system_json(&f),
            "diagnostics": {
                "interpolation_residual": residual,
                "schur_margin": margin,
                "notes": notes,
            },
        }),
        ok,
    ))
}

pub fn verify(prob: ProblemData, x: Option<&SchurParameter>, opts: &Options) -> Result<(Value, bool)> {
    let s = prepare(prob)?;
    let vopts = VerifyOptions {
        circle_points: opts.grid,
        radius_points: (opts.grid / 2).max(1),
        ..VerifyOptions::default()
    };
    let r = verify_solution(&s.prob, &s.pick, &s.pair, &s.coeffs, x, &vopts)?;
    let ok = r.passes(opts.tol);
    Ok((
        json!({
            "interpolation_residual": r.interpolation_residual,
            "schur_margin": r.schur_margin,
            "j_identity_residual": r.j_identity_residual,
            "spectral_factorization_residual": r.spectral_factorization_residual,
            "pair_residual": r.pair_residual,
            "quotient_residual": r.quotient_residual,
            "entropy_matrix": matrix_json(&r.entropy_matrix),
            "notes": r.notes,
            "tol": opts.tol,
            "passes": ok,
        }),
        ok,
    ))
}

pub fn pair(prob: ProblemData, opts: &Options) -> Result<(Value, bool)> {
    let pick = gramians(&prob, STEIN_TOL)?;
    let pair = complementary_pair(&prob, &pick, PAIR_TOL)?;
    let r = verify_pair(&pair, &prob, &pick)?;
    let ok = r.max() <= opts.tol;
    Ok((
        json!({
            "C": matrix_json(&pair.c),
            "D": matrix_json(&pair.d),
            "e": pair.e,
            "rank": pair.rank,
            "residuals": {
                "semiunit1": r.semiunit1,
                "semiunit2": r.semiunit2,
                "DD*+CPC*-I": r.dd_cpc,
                "BD*+ZPC*": r.bd_zpc,
                "D*D+B*P^-1B-I": r.dd_bpb,
                "D*C+B*P^-1Z": r.dc_bpz,
                "C*C+Z*P^-1Z-P^-1": r.cc_zpz,
            },
            "notes": ["C and D are unique up to a left unitary factor"],
        }),
        ok,
    ))
}

pub fn entropy(prob: ProblemData, x: Option<&SchurParameter>, opts: &Options) -> Result<(Value, bool)> {
    let s = prepare(prob)?;
    let central = entropy_central(&s.pick, &s.prob)?;
    let mut out = json!({ "central": matrix_json(&central) });
    let mut ok = true;
    if let Some(x) = x {
        let f = solution(&s, Some(x))?;
        let est = entropy_of_solution(&f, ENTROPY_START, ENTROPY_TOL)?;
        let gap_min = min_hermitian_eigenvalue(&hermitian_part(&(&central - &est.matrix)))?;
        ok = gap_min >= -opts.tol;
        out["solution"] = json!({
            "matrix": matrix_json(&est.matrix),
            "order": est.order,
            "strict": est.strict,
        });
        out["gap_min_eig"] = json!(gap_min);
    }
    Ok((out, ok))
}

pub fn leech(leech: &LeechInstance, opts: &Options) -> Result<(Value, bool)> {
    let prob = leech_truncate(leech)?;
    let pick = gramians(&prob, STEIN_TOL)?;
    let mut out = json!({
        "problem": serde_json::to_value(ProblemFile::from_problem(&prob))?,
        "classification": pick.classification.label(),
        "lambda_min_eig": pick.classification.min_eig(),
        "notes": [format!(
            "order-{} section: a necessary condition for the untruncated problem; solutions satisfy GF = K modulo λ^{}",
            leech.order, leech.order
        )],
    });
    if !pick.lambda_strictly_positive() {
        return Ok((out, false));
    }
    let f = central_solution(&prob, &pick)?;
    let table: Vec<Value> = (1..=leech.order)
        .map(|k| leech_residual(leech, &f, k).map(|r| json!({ "orders": k, "residual": r })))
        .collect::<ltonp::Result<_>>()?;
    let worst = leech_residual(leech, &f, leech.order)?;
    out["central_solution"] = system_json(&f);
    out["residuals"] = Value::Array(table);
    Ok((out, worst <= opts.tol))
}

pub fn clift(file: &ProblemFile, x: Option<&SchurParameter>, opts: &Options) -> Result<(Value, bool)> {
    let prob = commutant_lifting_instance(&file.lifting()?, COISOMETRY_TOL)?;
    solve(prob, x, opts)
}

/// Random problem, plus a random constant parameter, deterministic in the seed.
pub fn sample(dims: Option<(usize, usize, usize)>, opts: &Options) -> Result<(Value, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let prob = match dims {
        Some((n, p, q)) => random_instance_with_dims(&mut rng, n, p, q)?,
        None => random_instance(&mut rng)?,
    };
    let pick = gramians(&prob, STEIN_TOL)?;
    let pair = complementary_pair(&prob, &pick, PAIR_TOL)?;
    let x = SchurParameter::Constant(random_contraction(&mut rng, pair.e, prob.q()));
    Ok((
        json!({
            "seed": opts.seed,
            "problem": serde_json::to_value(ProblemFile::from_problem(&prob))?,
            "parameter": parameter_json(&x),
            "e": pair.e,
        }),
        true,
    ))
}
