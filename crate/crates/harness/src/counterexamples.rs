//! Reconstructions of the known failures of the extremal statements,
//! each checked with the exact oracle.

use polyslice::{
    closed_a, extremal_direction, hessian_eigenvalues, make_direction, perimeter_exact, section_volume_exact,
    structured_critical_points, Body, Functional, Objective, SectionQuery,
};

use crate::report::{CaseRecord, Relation, Report};
use crate::HarnessError;

pub const COUNTEREXAMPLES: &[&str] = &[
    "simplex-n2-volume",
    "simplex-n3-perimeter-edge",
    "xpoly-explicit-tilde",
    "cube-n3-perimeter-localmin",
    "cube-n4-volume-localmin",
];

pub fn counterexample(id: &str, seed: u64) -> Result<Report, HarnessError> {
    let cases = match id {
        "simplex-n2-volume" => simplex_n2_volume()?,
        "simplex-n3-perimeter-edge" => simplex_n3_perimeter_edge()?,
        "xpoly-explicit-tilde" => xpoly_explicit_tilde()?,
        "cube-n3-perimeter-localmin" => cube_local_min(3, Functional::Perimeter, 0.6, 0.66)?,
        "cube-n4-volume-localmin" => cube_local_min(4, Functional::Volume, 0.55, 0.65)?,
        _ => return Err(HarnessError::UnknownId(id.to_string())),
    };
    Ok(Report::assemble(id, seed, cases))
}

fn exact(body: Body, a: &[f64], t: f64, f: Functional) -> Result<f64, HarnessError> {
    let q = SectionQuery::from_raw(body, a, t)?;
    Ok(match f {
        Functional::Volume => section_volume_exact(&q)?,
        Functional::Perimeter => perimeter_exact(&q)?,
    })
}

fn simplex_n2_volume() -> Result<Vec<CaseRecord>, HarnessError> {
    let s2 = Body::simplex(2);
    let t: f64 = 0.45;
    let a1 = t + (t * t - 1.0 / 6.0).sqrt();
    let pts = structured_critical_points(s2, t, Functional::Volume)?;
    let p = pts
        .iter()
        .find(|p| (p.apex - a1).abs() < 1e-9)
        .ok_or(HarnessError::InvalidArgument("critical point off the apex not found".into()))?;
    let apex = extremal_direction::<f64>(s2);
    let canonical = closed_a(&SectionQuery::new(s2, apex, t)?)?.value;
    let v = exact(s2, p.a.coords(), t, Functional::Volume)?;
    Ok(vec![CaseRecord::new("simplex", 2, t, "exact-volume", v, canonical, Relation::Gt, 0.0)
        .with_direction(p.a.coords())
        .with_note(format!("apex coordinate {a1:.17e}; bound is the closed form at the vertex direction"))])
}

fn simplex_n3_perimeter_edge() -> Result<Vec<CaseRecord>, HarnessError> {
    let s3 = Body::simplex(3);
    let eps: f64 = 0.01;
    let s = (1.0 + 8.0 * eps * eps).sqrt();
    let bar = [0.5 + 2.0 * eps, 0.5 - 2.0 * eps, -0.5, -0.5].map(|x| x / s);
    let t = 0.5 * s;
    let apex = extremal_direction::<f64>(s3);
    let p_bar = exact(s3, &bar, t, Functional::Perimeter)?;
    let p_apex = exact(s3, apex.coords(), t, Functional::Perimeter)?;
    // limits as ε → 0, for comparison with the expansion's constants
    let limit_apex = exact(s3, apex.coords(), 0.5, Functional::Perimeter)?;
    let limit_bar = exact(s3, &[0.5, 0.5, -0.5, -0.5], 0.5, Functional::Perimeter)?;
    let c_apex = (9.0 * 2f64.sqrt() - 3.0 * 6f64.sqrt()) / 4.0;
    Ok(vec![
        CaseRecord::new("simplex", 3, t, "exact-perimeter", p_bar, p_apex, Relation::Gt, 0.0)
            .with_direction(&bar)
            .with_note("eps = 0.01; bound is the vertex direction"),
        CaseRecord::new("simplex", 3, 0.5, "limit-vertex-direction", limit_apex, c_apex, Relation::Abs, 1e-12)
            .with_direction(apex.coords())
            .with_note("(9√2 - 3√6)/4 ≈ 1.345")
            .as_evidence(),
        CaseRecord::new("simplex", 3, 0.5, "limit-edge-direction", limit_bar, 2f64.sqrt(), Relation::Abs, 1e-12)
            .with_direction(&[0.5, 0.5, -0.5, -0.5])
            .as_evidence(),
    ])
}

fn xpoly_explicit_tilde() -> Result<Vec<CaseRecord>, HarnessError> {
    let n = 5;
    let x5 = Body::cross_polytope(n);
    let t = 2.0 / n as f64;
    let tilde = make_direction(&[3.0, 2.0, 2.0, 2.0, 2.0], x5)?;
    let e1 = extremal_direction::<f64>(x5);
    let a_tilde = exact(x5, tilde.coords(), t, Functional::Volume)?;
    let a_e1 = exact(x5, e1.coords(), t, Functional::Volume)?;
    Ok(vec![
        CaseRecord::new("crosspolytope", n, t, "exact-volume", a_tilde, a_e1, Relation::Gt, 0.0).with_direction(tilde.coords()),
        CaseRecord::new("crosspolytope", n, t, "value-tilde", a_tilde, 18.0 / 125.0, Relation::Rel, 1e-12)
            .with_direction(tilde.coords()),
        CaseRecord::new("crosspolytope", n, t, "value-e1", a_e1, 54.0 / 625.0, Relation::Rel, 1e-12)
            .with_direction(e1.coords()),
        CaseRecord::new("crosspolytope", n, t, "ratio", a_tilde / a_e1, 5.0 / 3.0, Relation::Rel, 1e-12),
    ])
}

/// The main diagonal is a strict local minimum at `t_min` and a local maximum at `t_max`.
fn cube_local_min(n: usize, f: Functional, t_min: f64, t_max: f64) -> Result<Vec<CaseRecord>, HarnessError> {
    let body = Body::cube(n);
    let diag = extremal_direction::<f64>(body);
    let eig_lo = hessian_eigenvalues(body, &diag, t_min, Objective::Full(f))?;
    let eig_hi = hessian_eigenvalues(body, &diag, t_max, Objective::Full(f))?;
    let min = eig_lo.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig_hi.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut v: Vec<f64> = diag.coords().to_vec();
    v[0] += 0.02;
    v[1] -= 0.02;
    let moved = make_direction(&v, body)?;
    let at_diag = exact(body, diag.coords(), t_min, f)?;
    let at_moved = exact(body, moved.coords(), t_min, f)?;
    Ok(vec![
        CaseRecord::new("cube", n, t_min, &format!("hessian-{}-min-eig", f.name()), min, 0.0, Relation::Gt, 0.0)
            .with_direction(diag.coords()),
        CaseRecord::new("cube", n, t_min, &format!("exact-{}-perturbed", f.name()), at_moved, at_diag, Relation::Gt, 0.0)
            .with_direction(moved.coords()),
        CaseRecord::new("cube", n, t_max, &format!("hessian-{}-max-eig", f.name()), max, 0.0, Relation::Lt, 0.0)
            .with_direction(diag.coords()),
    ])
}
