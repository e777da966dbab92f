//! Function specs: `const:<c>`, `pow:<side>:<coeff>:<exponent>`, `sum:<spec>+<spec>+...`.

use fracvar::fracops::{AtomSum, Interval, PowerAtom};
use fracvar::Side;

fn number(s: &str, what: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("bad {what} `{s}`"))?;
    if !x.is_finite() {
        return Err(format!("{what} must be finite, got `{s}`"));
    }
    Ok(x)
}

fn atom(spec: &str) -> Result<PowerAtom, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["const", c] => PowerAtom::left(number(c, "constant")?, 0.0).map_err(|e| e.to_string()),
        ["pow", side, c, e] => {
            let side = match *side {
                "left" => Side::Left,
                "right" => Side::Right,
                other => return Err(format!("side must be `left` or `right`, got `{other}`")),
            };
            PowerAtom::new(side, number(c, "coefficient")?, number(e, "exponent")?)
                .map_err(|e| e.to_string())
        }
        _ => Err(format!("cannot parse function spec `{spec}`")),
    }
}

/// Splits a `sum:` body on the `+` separators that start a new term, so that
/// exponents such as `1e+3` stay intact.
fn terms(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, _) in body.match_indices('+') {
        let rest = &body[i + 1..];
        if ["const:", "pow:", "sum:"]
            .iter()
            .any(|p| rest.starts_with(p))
        {
            out.push(&body[start..i]);
            start = i + 1;
        }
    }
    out.push(&body[start..]);
    out
}

pub fn parse(spec: &str, interval: Interval) -> Result<AtomSum, String> {
    let spec = spec.trim();
    if let Some(body) = spec.strip_prefix("sum:") {
        let mut acc = AtomSum::zero(interval);
        for t in terms(body) {
            acc = acc.add(&parse(t, interval)?).map_err(|e| e.to_string())?;
        }
        return Ok(acc);
    }
    Ok(AtomSum::single(interval, atom(spec)?))
}

/// Constants carry no side; moving them to `side` keeps them on the exact path.
pub fn constants_to(f: &AtomSum, side: Side) -> AtomSum {
    let atoms = f.terms().iter().map(|a| {
        if a.exponent == 0.0 {
            PowerAtom { side, ..*a }
        } else {
            *a
        }
    });
    AtomSum::new(f.interval(), atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        let iv = Interval::unit();
        let f = parse("sum:pow:left:1.0:1.5+const:2+pow:right:-3:1e+0", iv).unwrap();
        assert_eq!(f.terms().len(), 3);
        assert!((f.eval(0.25) - (0.125 + 2.0 - 2.25)).abs() < 1e-15);
        assert_eq!(parse("const:1", iv).unwrap().eval(0.3), 1.0);
        for bad in [
            "",
            "const:",
            "const:x",
            "pow:up:1:1",
            "pow:left:1",
            "pow:left:1:-1",
            "pow:left:nan:1",
            "sum:const:1+oops",
        ] {
            assert!(parse(bad, iv).is_err(), "{bad}");
        }
    }

    #[test]
    fn constants_move_sides() {
        let iv = Interval::unit();
        let f = constants_to(&parse("sum:const:2+pow:left:1:1", iv).unwrap(), Side::Right);
        assert!(f
            .terms()
            .iter()
            .any(|a| a.side == Side::Right && a.exponent == 0.0));
        assert!(f
            .terms()
            .iter()
            .any(|a| a.side == Side::Left && a.exponent == 1.0));
    }
}
