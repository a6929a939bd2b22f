//! Plain-text dump in the common LP file format, for cross-checking a model
//! with an external solver. Fractional coefficients are written as decimals.

use std::fmt::Write;

use num_traits::{Signed, ToPrimitive, Zero};

use super::model::{IpModel, Rat, Sense, VarKind};

fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "_.".contains(c) { c } else { '_' })
        .collect();
    if s.chars().next().is_none_or(|c| c.is_ascii_digit() || c == '.') {
        s.insert(0, '_');
    }
    s
}

fn number(r: &Rat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}", r.to_f64().unwrap_or(f64::NAN))
    }
}

fn linear(out: &mut String, terms: &[(usize, Rat)], names: &[String]) {
    if terms.is_empty() {
        out.push_str(" 0");
        return;
    }
    for (k, (j, a)) in terms.iter().enumerate() {
        match (k, a.is_negative()) {
            (_, true) => out.push_str(" -"),
            (0, false) => {}
            (_, false) => out.push_str(" +"),
        }
        let mag = a.abs();
        if mag != Rat::from_integer(1) {
            let _ = write!(out, " {}", number(&mag));
        }
        let _ = write!(out, " {}", names[*j]);
    }
}

/// Renders the model; lazy rows are written as ordinary constraints.
pub fn to_lp_string(model: &IpModel) -> String {
    let names: Vec<String> = model.vars().iter().map(|v| sanitize(&v.name)).collect();
    let mut out = String::from("Minimize\n obj:");
    linear(&mut out, model.objective(), &names);
    out.push_str("\nSubject To\n");
    for (i, c) in model.constraints().iter().enumerate() {
        let name = if c.name.is_empty() {
            format!("r{i}")
        } else {
            sanitize(&c.name)
        };
        let _ = write!(out, " {name}:");
        linear(&mut out, &c.coefs, &names);
        let op = match c.sense {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        };
        let _ = writeln!(out, " {op} {}", number(&c.rhs));
    }
    out.push_str("Bounds\n");
    for (v, name) in model.vars().iter().zip(&names) {
        let _ = writeln!(out, " {} <= {} <= {}", v.lower, name, v.upper);
    }
    let general: Vec<&String> = model
        .vars()
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Integer)
        .map(|(_, n)| n)
        .collect();
    if !general.is_empty() {
        out.push_str("General\n");
        for n in general {
            let _ = writeln!(out, " {n}");
        }
    }
    let binary: Vec<&String> = model
        .vars()
        .iter()
        .zip(&names)
        .filter(|(v, _)| v.kind == VarKind::Binary)
        .map(|(_, n)| n)
        .collect();
    if !binary.is_empty() {
        out.push_str("Binary\n");
        for n in binary {
            let _ = writeln!(out, " {n}");
        }
    }
    out.push_str("End\n");
    if model.objective().iter().all(|(_, c)| c.is_zero()) {
        // keep the file parseable when the objective is empty
        out = out.replacen(" obj: 0", " obj: 0 _dummy", 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipcore::model::int;

    #[test]
    fn renders_sections() {
        let mut m = IpModel::new();
        let x = m.add_integer("x[1,2]", 0, 4).unwrap();
        let z = m.add_binary("z").unwrap();
        m.add_constraint("cover 1", vec![(x, Rat::new(1, 2)), (z, int(-1))], Sense::Ge, int(1))
            .unwrap();
        m.set_objective(vec![(x, int(3)), (z, int(1))]).unwrap();
        let s = to_lp_string(&m);
        assert!(s.contains("obj: 3 x_1_2_ + z"));
        assert!(s.contains("cover_1: 0.5 x_1_2_ - z >= 1"));
        assert!(s.contains("0 <= x_1_2_ <= 4"));
        assert!(s.contains("General\n x_1_2_\nBinary\n z\nEnd"));
    }
}
