use num_integer::Integer;
use shiftplan::ipcore::{IpModel, Rat, Sense, VarKind};

fn lcm_of(values: impl Iterator<Item = Rat>) -> i64 {
    values.fold(1i64, |acc, r| acc.lcm(r.denom()))
}

/// Exhaustive optimum of a pure-binary model by Gray-code enumeration with
/// incremental row activities in scaled integers. Returns the optimal
/// objective, or `None` when no point is feasible.
pub fn gray_code_optimum(model: &IpModel) -> Option<Rat> {
    let n = model.num_vars();
    assert!(n <= 24, "too many variables for enumeration");
    assert!(model.vars().iter().all(|v| v.kind == VarKind::Binary && v.lower == 0 && v.upper == 1));
    let rows: Vec<(Vec<i64>, Sense, i64)> = model
        .constraints()
        .iter()
        .map(|c| {
            let scale = lcm_of(c.coefs.iter().map(|(_, a)| *a).chain([c.rhs]));
            let mut dense = vec![0i64; n];
            for (j, a) in &c.coefs {
                dense[*j] = (a * Rat::from(scale)).to_integer();
            }
            (dense, c.sense, (c.rhs * Rat::from(scale)).to_integer())
        })
        .collect();
    let oscale = lcm_of(model.objective().iter().map(|(_, c)| *c));
    let mut cost = vec![0i64; n];
    for (j, c) in model.objective() {
        cost[*j] = (c * Rat::from(oscale)).to_integer();
    }
    let mut act = vec![0i64; rows.len()];
    let mut x = vec![false; n];
    let mut obj = 0i64;
    let feasible = |act: &[i64]| {
        rows.iter().zip(act).all(|((_, s, rhs), a)| match s {
            Sense::Le => a <= rhs,
            Sense::Ge => a >= rhs,
            Sense::Eq => a == rhs,
        })
    };
    let mut best = if feasible(&act) { Some(obj) } else { None };
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let sign = if x[j] { -1 } else { 1 };
        x[j] = !x[j];
        obj += sign * cost[j];
        for (a, (dense, _, _)) in act.iter_mut().zip(&rows) {
            *a += sign * dense[j];
        }
        if best.is_none_or(|b| obj < b) && feasible(&act) {
            best = Some(obj);
        }
    }
    best.map(|b| Rat::new(b, oscale))
}
