use sakiadis::field::{
    envelope_eta, eta_for_stream_value, map_to_physical, similarity_eta, streamline, velocity_grid,
};
use sakiadis::oracle::{
    count_sign_changes, integrate_transformed_ivp, integrate_transformed_ivp_from,
    integrate_wall_profile, shoot_original_bvp,
};
use sakiadis::sakiadis::Coefficients;
use sakiadis::{solve, RealScalar, SakiadisSolution, TruncatedSeries};

fn exact_f64() -> (SakiadisSolution<f64>, TruncatedSeries<f64>) {
    let coeffs = Coefficients::exact(37).unwrap();
    let sol = coeffs.solution::<f64>(37, &()).unwrap();
    let a = coeffs.a().map(|r| <f64 as RealScalar>::from_rational(r, &()));
    (sol, a)
}

/// The transformed solution `F(g)` is the far-field series itself.
fn series_f_of_g(a: &TruncatedSeries<f64>, g: f64) -> f64 {
    a.eval(&g)
}

#[test]
fn rk4_tracks_the_series_on_the_disc() {
    let (_, a) = exact_f64();
    let ivp = integrate_transformed_ivp(1e-4, -1.0).unwrap_err();
    // g_min = -1 never reaches F = 0
    assert!(matches!(ivp, sakiadis::Error::NoCrossing { .. }));

    let ivp = integrate_transformed_ivp(1e-4, -1.5).unwrap();
    let mut worst: f64 = 0.0;
    for &(g, [f, _, _]) in ivp.samples.iter().step_by(50) {
        if g < -1.0 {
            break;
        }
        worst = worst.max((f - series_f_of_g(&a, g)).abs());
    }
    assert!(worst < 1e-8, "{worst:e}");
}

/// Steps next to the singular start hold the global order near 2.8 instead of 4.
#[test]
fn rk4_converges_at_high_order() {
    let (_, a) = exact_f64();
    let worst = |step: f64| {
        integrate_transformed_ivp(step, -1.5)
            .unwrap()
            .samples
            .iter()
            .filter(|s| s.0 >= -1.0)
            .map(|&(g, [f, _, _])| (f - series_f_of_g(&a, g)).abs())
            .fold(0.0, f64::max)
    };
    let errors: Vec<f64> = [1.6e-2, 8e-3, 4e-3, 2e-3].into_iter().map(worst).collect();
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((5.5..20.0).contains(&ratio), "ratio {ratio}, errors {errors:?}");
    }
}

#[test]
fn rk4_crossing_is_unique_and_close() {
    let (sol, _) = exact_f64();
    let ivp = integrate_transformed_ivp(1e-3, -3.0).unwrap();
    assert_eq!(count_sign_changes(&ivp), 1);
    assert!((ivp.estimate - sol.gamma()).abs() < 1e-4);
}

#[test]
fn rk4_seed_near_the_singular_point() {
    let ivp = integrate_transformed_ivp_from(1e-3, -1.5, 1e-6).unwrap();
    let (g, [f, fp, _]) = ivp.samples[0];
    assert!((g + 1e-6).abs() < 1e-15);
    assert!((f - (1.0 + g)).abs() < 1e-11);
    assert!((fp - 1.0).abs() < 1e-6);
}

#[test]
fn shooting_with_a_shorter_domain() {
    let (sol, _) = exact_f64();
    let shot = shoot_original_bvp(20.0, 1e-10).unwrap();
    assert!((shot.estimate - sol.kappa()).abs() < 1e-7);
    assert!(shoot_original_bvp(5.0, 1e-10).is_err());
}

#[test]
fn wall_profile_with_series_kappa_decays() {
    let (sol, _) = exact_f64();
    let profile = integrate_wall_profile(*sol.kappa(), 20.0, 1e-3);
    let (eta, [f, fp, _]) = *profile.last().unwrap();
    assert!((eta - 20.0).abs() < 1e-9);
    assert!(fp.abs() < 1e-6);
    assert!((f - sol.eval_f(&20.0).unwrap()).abs() < 1e-8);
}

#[test]
fn envelope_matches_the_oracle_profile() {
    let (sol, _) = exact_f64();
    let profile = integrate_wall_profile(*sol.kappa(), 10.0, 1e-4);
    let crossing = profile.windows(2).find(|w| w[0].1[1] >= 0.5 && w[1].1[1] < 0.5).unwrap();
    let (e0, s0) = crossing[0];
    let (e1, s1) = crossing[1];
    let oracle_eta = e0 + (0.5 - s0[1]) * (e1 - e0) / (s1[1] - s0[1]);
    let eta = envelope_eta(&sol, 0.5).unwrap();
    assert!((eta - oracle_eta).abs() < 1e-4, "{eta} vs {oracle_eta}");
    assert!((envelope_eta(&sol, 0.1).unwrap() - 3.47).abs() < 0.02);
    assert!(envelope_eta(&sol, 1.5).is_err());
}

#[test]
fn field_coordinates_invert() {
    let (sol, _) = exact_f64();
    for &(eta, psi) in &[(0.5, 1.0), (2.0, 3.0), (3.4, 10.0)] {
        let s = map_to_physical(&sol, eta, psi).unwrap();
        assert!((similarity_eta(s.x_bar, s.y_bar).unwrap() - eta).abs() < 1e-12);
        assert!((sol.eval_f(&eta).unwrap() * s.x_bar.sqrt() - psi).abs() < 1e-12);
        assert!((s.u_ratio - sol.eval_fp(&eta).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn streamlines_stay_ordered() {
    let (sol, _) = exact_f64();
    let eta_star = envelope_eta(&sol, 0.1).unwrap();
    let lo = eta_for_stream_value(&sol, 0.1).unwrap();
    let inner = streamline(&sol, 1.0, (lo, eta_star), 50, None).unwrap();
    let outer = streamline(&sol, 2.0, (lo, eta_star), 50, None).unwrap();
    // along an eta ray, larger psi sits further downstream
    for (p, q) in inner.points.iter().zip(&outer.points) {
        assert!(q.0 > p.0 && q.1 > p.1);
    }
    let clipped = streamline(&sol, 1.0, (lo, 6.0), 50, Some(0.1)).unwrap();
    assert!(clipped.points.len() < 50);
}

#[test]
fn velocity_grid_bounds() {
    let sol = solve(37, 17).unwrap().to_f64();
    let grid = velocity_grid(&sol, (0.5, 100.0), (0.0, 35.0), 21).unwrap();
    assert_eq!(grid.x_bar.len(), 21);
    assert_eq!(grid.y_bar.len(), 21);
    for j in 0..21 {
        assert!((grid.at(0, j) - 1.0).abs() < 1e-12);
    }
    for i in 0..21 {
        for j in 0..21 {
            let u = grid.at(i, j);
            assert!((0.0..=1.0 + 1e-12).contains(&u));
        }
    }
}
