use apolar::numeric::{waring_decompose_numeric, DecomposeConfig};
use apolar::powersum::planted_instance;
use num_traits::ToPrimitive;

fn main() {
    for seed in [23u64, 26] {
        let inst = planted_instance(seed, 3, 4).unwrap();
        let maxcoord = inst.points.iter().flat_map(|p| p.coords()).map(|c| c.to_f64().unwrap().abs()).fold(0.0f64, f64::max);
        let maxcoef = inst.form.terms().map(|(_, c)| c.to_f64().unwrap().abs()).fold(0.0f64, f64::max);
        let config = DecomposeConfig { restarts: 200, seed, tol: 1e-1, ..DecomposeConfig::default() };
        let result = waring_decompose_numeric(&inst.form, 6, &config);
        let best = result.solutions.first().map(|s| s.residual).unwrap_or(f64::NAN);
        println!("seed {seed}: maxcoord {maxcoord}, maxcoef {maxcoef:.1}, best residual {best:e}, {} sols", result.solutions.len());
    }
}
