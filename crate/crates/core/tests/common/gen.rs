use rand::Rng;
use shiftplan::ipcore::{int, IpModel, Rat, Sense};

/// A random pure-binary model with small integer (and occasional half)
/// coefficients.
pub fn random_binary_ip<R: Rng>(rng: &mut R, max_vars: usize) -> IpModel {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=8);
    let mut model = IpModel::new();
    let xs: Vec<usize> = (0..n).map(|j| model.add_binary(format!("b{j}")).unwrap()).collect();
    for i in 0..m {
        let mut coefs = Vec::new();
        for &x in &xs {
            if rng.gen_bool(0.5) {
                let a: i64 = rng.gen_range(-5..=5);
                let coef = if rng.gen_bool(0.15) { Rat::new(2 * a + 1, 2) } else { int(a) };
                coefs.push((x, coef));
            }
        }
        let sense = match rng.gen_range(0..5) {
            0 => Sense::Eq,
            1 | 2 => Sense::Le,
            _ => Sense::Ge,
        };
        let rhs = match sense {
            Sense::Eq => int(rng.gen_range(-2..=3)),
            Sense::Le => int(rng.gen_range(-1..=8)),
            Sense::Ge => int(rng.gen_range(-3..=4)),
        };
        model.add_constraint(format!("r{i}"), coefs, sense, rhs).unwrap();
    }
    let obj = xs.iter().map(|&x| (x, int(rng.gen_range(-10..=10)))).collect();
    model.set_objective(obj).unwrap();
    model
}
