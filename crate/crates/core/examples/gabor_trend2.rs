use dtcwt_core::filterbank::{build_system_with_fine, gabor_fit, SplineParams};

fn main() {
    for (fine, period) in [(4096usize, 64.0f64), (8192, 64.0), (4096, 32.0), (16384, 128.0)] {
        print!("fine={fine:6} T={period:5.1}: ");
        for alpha in [2.0, 4.0, 6.0, 8.0] {
            let params = SplineParams::new(alpha, 0.0).unwrap();
            let sys = build_system_with_fine(params, 256, 3, fine, period).unwrap();
            let fit = gabor_fit(&sys).unwrap();
            print!("a{alpha}={:.6} ", fit.correlation);
        }
        println!();
    }
    // tau dependence
    for tau in [0.0, 0.25, -0.5] {
        let params = SplineParams::new(8.0, tau).unwrap();
        let sys = build_system_with_fine(params, 256, 3, 4096, 64.0).unwrap();
        let fit = gabor_fit(&sys).unwrap();
        println!("tau={tau:+.2} corr={:.6}", fit.correlation);
    }
}
