//! The numeric core instantiates at f32 as well as f64; reference
//! tolerances belong to f64, so the narrow type only gets smoke checks.

use aoi_core::analytic::{mm11_violation, zero_wait_exp_violation};
use aoi_core::dist::DistributionSpec;
use aoi_core::quad;
use aoi_core::sample_path::{simulate, SystemSpec};

#[test]
fn closed_forms_agree_across_scalars() {
    for (lam, mu, d) in [(1.0, 1.0, 5.0), (0.5, 1.0, 3.0), (2.0, 1.0, 1.0)] {
        let wide = mm11_violation::<f64>(lam, mu, d).value;
        let narrow = mm11_violation::<f32>(lam as f32, mu as f32, d as f32).value;
        assert!((wide - narrow as f64).abs() < 1e-4, "{wide} vs {narrow}");
    }
    let wide = zero_wait_exp_violation::<f64>(1.0, 1.0).value;
    let narrow = zero_wait_exp_violation::<f32>(1.0, 1.0).value;
    assert!((wide - narrow as f64).abs() < 1e-5);
}

#[test]
fn narrow_scalar_simulation_runs() {
    let spec: SystemSpec<f32> = SystemSpec::gg11(
        DistributionSpec::exponential(1.0f32).unwrap(),
        "exp(1)".parse().unwrap(),
    );
    let path = simulate(&spec, 20_000, 7).unwrap();
    let est = path.violation_estimate(5.0f32);
    let exact = mm11_violation::<f32>(1.0, 1.0, 5.0).value;
    assert!((est.value - exact).abs() < 0.02, "{} vs {exact}", est.value);
}

#[test]
fn narrow_scalar_quadrature_runs() {
    let r = quad::integrate(|x: f32| (-x).exp(), 0.0f32, 20.0f32, 1e-5);
    assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);
}
