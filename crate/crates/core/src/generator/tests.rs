use super::*;
use crate::expr::parse;
use crate::oracle::{integrate_window, linspace, residual_norm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ode(a: &str, b: &str, c: &str) -> SecondOrderODE {
    SecondOrderODE {
        a: parse(a).unwrap(),
        b: parse(b).unwrap(),
        c: parse(c).unwrap(),
        interval: Interval::new(0.0, f64::INFINITY),
    }
}

fn one(alpha: f64, beta: f64) -> FamilySpec {
    FamilySpec::new(SigmaCase::One, alpha, beta).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn eliminate_examples() {
    let nf = eliminate_first_derivative(&ode("1", "0", "r^2 + 3"), None).unwrap();
    assert_eq!(nf.gauge, Expr::Const(1.0));
    assert!(close(nf.potential.eval(1.7).unwrap(), 1.7 * 1.7 + 3.0, 1e-15));

    let c = 0.6;
    let nf = eliminate_first_derivative(&ode("1", "-2*r", "r^2 + 0.6"), None).unwrap();
    for r in [0.2, 1.0, 2.5] {
        assert!(close(nf.gauge.eval(r).unwrap(), (-r * r / 2.0f64).exp(), 1e-15));
        assert!(close(nf.potential.eval(r).unwrap(), c + 1.0, 1e-14));
    }

    let nf = eliminate_first_derivative(&ode("r", "1", "0"), None).unwrap();
    for r in [0.3, 2.0] {
        assert!(close(nf.gauge.eval(r).unwrap(), r.sqrt(), 1e-15));
        assert!(close(nf.potential.eval(r).unwrap(), 1.0 / (4.0 * r * r), 1e-14));
    }

    assert!(matches!(
        eliminate_first_derivative(&ode("1", "exp(r)", "0"), None),
        Err(Error::NonIntegrableGauge(_))
    ));
    let nf = eliminate_first_derivative(&ode("1", "exp(r)", "0"), Some(&parse("exp(r)/2").unwrap()))
        .unwrap();
    assert!(close(nf.gauge.eval(0.0).unwrap(), 0.5f64.exp(), 1e-15));
}

#[test]
fn gauge_identity_on_manufactured_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let a0: f64 = rng.gen_range(0.5..2.0);
        let p: i64 = rng.gen_range(0..3);
        let (b0, b1, b2): (f64, f64, f64) =
            (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5));
        let (g1, g2): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.0));
        let r = Expr::var;
        let a = (r().powi(p) * a0).simplify();
        let b = (r().powi(2) * b2 + r() * b1 + b0).simplify();
        let psi = ((r().powi(2) * g2 + r() * g1).exp() * (r().powi(2) + 1.0)).simplify();
        let c = (-(a.clone() * psi.nth_diff(2) + b.clone() * psi.diff()) * psi.clone().recip())
            .simplify();
        let sys = SecondOrderODE { a, b, c, interval: Interval::new(0.0, f64::INFINITY) };
        let nf = eliminate_first_derivative(&sys, None).unwrap();
        let u = (nf.gauge.clone() * psi.clone()).simplify();
        let (d2, uc, qc) = (u.nth_diff(2).compile(), u.compile(), nf.potential.compile());
        for x in linspace(0.2, 3.0, 50) {
            let (uv, d2v) = (uc.eval(x).unwrap(), d2.eval(x).unwrap());
            let res = d2v + qc.eval(x).unwrap() * uv;
            assert!(res.abs() <= 1e-7 * (1.0 + d2v.abs()), "p={p} x={x}: {res}");
        }
    }
}

#[test]
fn decompose_examples() {
    let d = decompose(&one(-2.0, 0.0), 0).unwrap();
    assert_eq!(d.c_zero_at(0), -1.0);
    let d = decompose(&one(-2.0, 4.0), 1).unwrap();
    assert_eq!((d.c_plus, d.c_minus, d.c_zero_at(1)), (1.0, -4.0, 3.0));
    assert_eq!(d.i_plus, parse("x^2").unwrap());
    assert_eq!(d.i_minus, Expr::Var);
    let s = FamilySpec::new(SigmaCase::S, -1.0, 1.0).unwrap();
    assert!(matches!(decompose(&s, 0), Err(Error::Unimplemented(_))));
}

#[test]
fn decomposition_reassembles_potential_minus_eigenvalue() {
    for (al, be, m, ell) in [(-2.0, 0.0, 0, 0), (-1.3, 0.7, 1, 3), (-3.0, -2.0, 2, 5)] {
        let f = one(al, be);
        let d = decompose(&f, m).unwrap();
        let v = crate::schrodinger::potential(&f, m).unwrap().potential;
        let lam = f.eigenvalue(ell).unwrap();
        let re = d.reassemble(ell);
        for x in [-2.0, 0.0, 1.3] {
            let want = v.eval(x).unwrap() - lam;
            assert!((re.eval(x).unwrap() - want).abs() <= 1e-10 * (1.0 + want.abs()));
        }
    }
}

#[test]
fn substitute_maps_and_corrections() {
    let d = decompose(&one(-2.0, 1.0), 0).unwrap();
    // k = +1: I₁ = x², x = √(2r).
    let t = substitute(&d, 1).unwrap();
    for r in [0.1, 1.0, 7.0] {
        assert!(close(t.map.x_of_r.eval(r).unwrap(), (2.0 * r).sqrt(), 1e-15));
        assert!(close(t.correction.eval(r).unwrap(), -3.0 / (16.0 * r * r), 1e-14));
    }
    // k = -1: I₋₁ = x, x = (3r/2)^{2/3}.
    let t = substitute(&d, -1).unwrap();
    for r in [0.1, 1.0, 7.0] {
        assert!(close(t.map.x_of_r.eval(r).unwrap(), (1.5 * r).powf(2.0 / 3.0), 1e-15));
        assert!(close(t.correction.eval(r).unwrap(), -5.0 / (36.0 * r * r), 1e-14));
    }
    // The correction in x for I₁ = x² is -3/(4x⁴).
    let ik = parse("x^2").unwrap();
    let corr = (ik.diff().powi(2) * ik.clone().powi(-3) * (-5.0 / 16.0)
        + ik.nth_diff(2) * ik.clone().powi(-2) * 0.25)
        .simplify();
    assert!(close(corr.eval(1.3).unwrap(), -3.0 / (4.0 * 1.3f64.powi(4)), 1e-14));
}

#[test]
fn substitution_map_solves_its_ode() {
    let d = decompose(&one(-2.0, 1.0), 0).unwrap();
    for k in [1, -1] {
        let t = substitute(&d, k).unwrap();
        let dx = t.map.x_of_r.diff();
        for r in linspace(0.01, 20.0, 100) {
            let x = t.map.x_of_r.eval(r).unwrap();
            let want = 1.0 / d.i(k).eval(x).unwrap().sqrt();
            assert!(close(dx.eval(r).unwrap(), want, 1e-9));
        }
    }
}

#[test]
fn oscillator_substitution_matches_both_forms() {
    // x = √(2r): αβ/2 /√(2r) + C₀/(2r) - 3/(16r²), E = -α²/4.
    let (al, be, m, ell) = (-2.0, 1.0, 0, 3);
    let sys = generate(&one(al, be), ell, m, 1).unwrap();
    let c0 = be * be / 4.0 + al / 2.0 - al * m as f64 + al * ell as f64;
    for r in [0.05f64, 0.7, 4.0] {
        let want = al * be / 2.0 / (2.0 * r).sqrt() + c0 / (2.0 * r) - 3.0 / (16.0 * r * r);
        assert!(close(sys.potential.eval(r).unwrap(), want, 1e-13));
    }
    assert_eq!(sys.energy, -al * al / 4.0);
    // x = (3r/2)^{2/3}: α²/4 (3r/2)^{2/3} + C₀ (2/(3r))^{2/3} - 5/(36r²), E = -αβ/2.
    let sys = generate(&one(al, be), ell, m, -1).unwrap();
    for r in [0.05f64, 0.7, 4.0] {
        let want = al * al / 4.0 * (1.5 * r).powf(2.0 / 3.0)
            + c0 * (2.0 / (3.0 * r)).powf(2.0 / 3.0)
            - 5.0 / (36.0 * r * r);
        assert!(close(sys.potential.eval(r).unwrap(), want, 1e-13));
    }
    assert_eq!(sys.energy, -al * be / 2.0);
}

#[test]
fn generated_eigenfunctions_have_small_residual() {
    let grid = linspace(1e-3, 30.0, 120);
    for (al, be) in [(-2.0, 1.0), (-1.0, -0.5)] {
        for ell in 0..=6 {
            for m in 0..=ell {
                for k in [1, -1] {
                    let sys = generate(&one(al, be), ell, m, k).unwrap();
                    let psi = sys.psi.as_ref().unwrap();
                    let res = residual_norm(&sys.potential, sys.energy, psi, &grid).unwrap();
                    assert!(res <= 1e-8, "alpha={al} ell={ell} m={m} k={k}: {res}");
                }
            }
        }
    }
}

#[test]
fn quantsys_examples() {
    let p = solve_params_quantsys(1.0, 0.0, 0, Branch::Plus).unwrap();
    assert_eq!(p.energy, 2.0);
    let want = |r: f64| {
        r.powf(1.0 / 6.0)
            * (-0.75 * 1.5f64.cbrt() * r.powf(4.0 / 3.0) + 2.25f64.cbrt() * r.powf(2.0 / 3.0)).exp()
    };
    for r in [0.01, 0.5, 3.0] {
        assert!(close(p.psi.eval(r).unwrap(), want(r), 1e-13));
    }
    let p = solve_params_quantsys(1.0, 0.0, 1, Branch::Minus).unwrap();
    assert!((p.energy + 2.0 * 3f64.sqrt()).abs() < 1e-12);
    assert!(matches!(
        solve_params_quantsys(1.0, -5.0, 1, Branch::Plus),
        Err(Error::Inadmissible(_))
    ));
    assert_eq!(solve_params_quantsys(1.0, -5.0, 2, Branch::Plus).unwrap().energy, 0.0);
    assert!(matches!(
        solve_params_quantsys(0.0, 1.0, 0, Branch::Plus),
        Err(Error::Inadmissible(_))
    ));
}

#[test]
fn quantsys_energy_formula_and_sign_lock() {
    for (c1, c2) in [(1.0, 0.0), (0.5, 2.0), (2.0, -1.0)] {
        for n in 0..5 {
            for b in [Branch::Plus, Branch::Minus] {
                let Ok(p) = solve_params_quantsys(c1, c2, n, b) else { continue };
                let formula = b.sign()
                    * 2.0
                    * (c1 * c2 + c1 * f64::sqrt(c1) * (1.0 + 2.0 * n as f64)).max(0.0).sqrt();
                assert!((p.energy - formula).abs() <= 1e-12 * formula.abs().max(1.0));
                // E = -C_{-1} at the solved parameters.
                let d = decompose(&p.family(), 0).unwrap();
                assert!((p.energy + d.c(-1)).abs() <= 1e-12 * p.energy.abs().max(1.0));
                assert!(p.energy.signum() * p.beta.signum() >= 0.0);
            }
        }
    }
}

#[test]
fn closed_form_matches_pipeline_up_to_a_constant() {
    let pts = linspace(0.05, 6.0, 50);
    for n in 0..=4 {
        for b in [Branch::Plus, Branch::Minus] {
            let p = solve_params_quantsys(1.0, 0.0, n, b).unwrap();
            let cf = p.psi.compile();
            for m in [0, 1, 3] {
                let sys = generate(&p.family(), n + m, m, -1).unwrap();
                let pl = sys.psi.unwrap().compile();
                let ratios: Vec<f64> =
                    pts.iter().map(|&r| pl.eval(r).unwrap() / cf.eval(r).unwrap()).collect();
                let r0 = ratios[0];
                for (r, q) in pts.iter().zip(&ratios) {
                    // Skip near-nodes where both vanish.
                    if cf.eval(*r).unwrap().abs() < 1e-8 {
                        continue;
                    }
                    assert!((q - r0).abs() <= 1e-8 * r0.abs(), "n={n} m={m} {b:?} r={r}");
                }
            }
        }
    }
}

#[test]
fn quantsys_eigenfunctions_are_square_integrable() {
    for n in 0..4 {
        for b in [Branch::Plus, Branch::Minus] {
            let p = solve_params_quantsys(1.0, 0.0, n, b).unwrap();
            let c = p.psi.compile();
            let q = integrate_window(|r| c.eval_or_nan(r).powi(2), 0.0, f64::INFINITY, (0.0, 8.0), 1e-10)
                .unwrap();
            assert!(q.value.is_finite() && q.value > 0.0);
            assert!(q.error_estimate <= 1e-8 * q.value);
        }
    }
}

#[test]
fn inverse_sqrt_examples() {
    // Forward: α=-2, β=1, m=0, ℓ=3 gives c₁=-1, c₂=-6.75.
    let got = solve_params_inverse_sqrt(-1.0, -6.75, 3).unwrap();
    let hit = got.iter().find(|p| (p.alpha + 2.0).abs() < 1e-10).expect("alpha = -2");
    assert!((hit.energy + 1.0).abs() < 1e-12);
    assert!((hit.beta - 1.0).abs() < 1e-10);

    let d = inverse_sqrt_roots(0.0, -3.0, 1);
    assert!(d.degenerate);
    let adm: Vec<_> = d.roots.iter().filter(|r| r.admissible).collect();
    assert_eq!(adm.len(), 1);
    assert!((adm[0].alpha + 2.0).abs() < 1e-15 && adm[0].beta == 0.0);
    assert!(matches!(
        solve_params_inverse_sqrt(0.0, 3.0, 1),
        Err(Error::NoAdmissibleRoot(_))
    ));

    let got = solve_params_inverse_sqrt(-1.0, 0.0, 0).unwrap();
    assert_eq!(got.len(), 1);
    assert!((got[0].alpha + 2f64.cbrt()).abs() < 1e-12);
    assert!((got[0].energy + 2f64.cbrt().powi(2) / 4.0).abs() < 1e-12);
    let v = params::inverse_sqrt_potential(-1.0, 0.0);
    let res = residual_norm(&v, got[0].energy, &got[0].psi, &linspace(1e-3, 30.0, 200)).unwrap();
    assert!(res < 1e-8, "{res}");
}

#[test]
fn inverse_sqrt_roots_solve_the_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (c1, c2): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-10.0..10.0));
        let n = rng.gen_range(0..6);
        for r in inverse_sqrt_roots(c1, c2, n).roots {
            let lhs1 = r.alpha * r.beta / 2.0;
            let lhs2 = r.beta * r.beta / 4.0 + r.alpha / 2.0 + r.alpha * n as f64;
            assert!((lhs1 - c1).abs() < 1e-9 * c1.abs().max(1.0));
            assert!((lhs2 - c2).abs() < 1e-9 * c2.abs().max(1.0), "{c1} {c2} {n}: {r:?}");
        }
    }
}

#[test]
fn cubic_roots() {
    let r = cubic_real_roots(1.0, -6.0, 11.0, -6.0);
    assert_eq!(r.len(), 3);
    for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let r = cubic_real_roots(1.0, 0.0, 0.0, -8.0);
    assert_eq!(r.len(), 1);
    assert!((r[0] - 2.0).abs() < 1e-14);
}

#[test]
fn reproduce_dw_examples() {
    let sys = reproduce_dw(1.0, 0.0, -1.0, 1).unwrap();
    let pat = dw_pattern(&sys).unwrap();
    assert!(pat.unexpected.is_empty(), "{pat:?}");
    assert!((pat.theta2 - 1.0).abs() < 1e-14 && pat.rho.abs() < 1e-14);
    assert!((pat.lambda + 1.0).abs() < 1e-14 && (pat.correction + 3.0 / 16.0).abs() < 1e-14);
    let ground = parse("r^(1/4)*exp(-r)").unwrap();
    let res = residual_norm(&sys.potential, 0.0, &ground, &linspace(1e-3, 30.0, 300)).unwrap();
    assert!(res < 1e-10, "{res}");
    // The pipeline's own transform of e^{-x²/2} is the same function up to 2^{1/4}.
    let t = sys.transform(&parse("exp(-x^2/2)").unwrap());
    assert!(close(t.eval(0.8).unwrap(), 2f64.powf(0.25) * ground.eval(0.8).unwrap(), 1e-14));

    let sys = reproduce_dw(1.0, 0.0, -1.0, 2).unwrap();
    let pat = dw_pattern(&sys).unwrap();
    assert!(pat.unexpected.is_empty(), "{pat:?}");
    let got = [pat.theta2, pat.lambda, pat.correction, pat.rho];
    for (g, w) in got.iter().zip([1.0, -1.0, -5.0 / 36.0, 0.0]) {
        assert!((g - w).abs() < 1e-14, "{got:?}");
    }

    let sys = reproduce_dw(0.0, 0.0, 0.0, 1).unwrap();
    let raw = dw_pattern(&sys).unwrap().raw;
    assert_eq!(raw.len(), 1);
    assert_eq!(raw[&Rational::from_integer(-2)], -3.0 / 16.0);
}

#[test]
fn matched_boundary_beats_dirichlet() {
    let chk = matched_boundary_check(1.0, 0.0, 0, Branch::Plus, 1e-3, 40.0, 4000).unwrap();
    assert!(chk.matched_err < 2e-3, "{chk:?}");
    assert!(chk.dirichlet_err > 0.1, "{chk:?}");
}
