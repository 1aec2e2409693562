use dtcwt_core::filterbank::{build_system_with_fine, gabor_fit, SplineParams};

fn main() {
    for alpha in [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0] {
        let params = SplineParams::new(alpha, 0.0).unwrap();
        let sys = build_system_with_fine(params, 256, 3, 4096, 64.0).unwrap();
        let fit = gabor_fit(&sys).unwrap();
        println!(
            "alpha={alpha:5.1}  corr={:.6}  omega0={:.4} ({:.4} pi)  xi0={:+.4}",
            fit.correlation,
            fit.omega0,
            fit.omega0 / std::f64::consts::PI,
            fit.xi0
        );
    }
}
