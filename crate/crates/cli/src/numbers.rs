//! Numeric flag values: plain decimals or `pi/k`.

use std::f64::consts::PI;

/// Parses a decimal, `pi`, `-pi`, `pi/k` or `-pi/k` with `k` a positive decimal.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let value = if let Some(rest) = body.strip_prefix("pi") {
        if rest.is_empty() {
            PI
        } else {
            let k = rest
                .strip_prefix('/')
                .and_then(|d| d.parse::<f64>().ok())
                .filter(|k| k.is_finite() && *k > 0.0)
                .ok_or_else(|| format!("{text:?} is not a decimal or pi/k"))?;
            PI / k
        }
    } else {
        body.parse::<f64>().map_err(|_| format!("{text:?} is not a decimal or pi/k"))?
    };
    if !value.is_finite() {
        return Err(format!("{text:?} is not finite"));
    }
    Ok(sign * value)
}

/// Comma-separated numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

pub fn parse_list(text: &str) -> Result<NumList, String> {
    let values = text.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
    Ok(NumList(values))
}

/// Semicolon-separated configurations, each a comma-separated list.
#[derive(Debug, Clone, PartialEq)]
pub struct PointList(pub Vec<Vec<f64>>);

pub fn parse_points(text: &str) -> Result<PointList, String> {
    let points = text
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_list(p).map(|l| l.0))
        .collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        return Err("no points given".into());
    }
    Ok(PointList(points))
}

/// `lo,hi` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

pub fn parse_bounds(text: &str) -> Result<Bounds, String> {
    match parse_list(text)?.0[..] {
        [lo, hi] if lo < hi => Ok(Bounds { lo, hi }),
        _ => Err(format!("{text:?} is not lo,hi with lo < hi")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_and_pi_fractions() {
        assert_eq!(parse_number("0.25"), Ok(0.25));
        assert_eq!(parse_number("-1e-3"), Ok(-1e-3));
        assert_eq!(parse_number("pi"), Ok(PI));
        assert_eq!(parse_number("pi/16"), Ok(PI / 16.0));
        assert_eq!(parse_number("-pi/4"), Ok(-PI / 4.0));
        assert_eq!(parse_number(" pi/2.5 "), Ok(PI / 2.5));
    }

    #[test]
    fn rejects_other_forms() {
        for bad in ["2pi", "pi/0", "pi/", "pi*2", "1/2", "", "nan", "inf", "pi/-3"] {
            assert!(parse_number(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists_points_and_bounds() {
        assert_eq!(parse_list("-1,0,pi/2").unwrap().0, vec![-1.0, 0.0, PI / 2.0]);
        assert!(parse_list("1,,2").is_err());
        assert_eq!(parse_points("1,2;3,4;").unwrap().0, vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert!(parse_points(";").is_err());
        assert_eq!(parse_bounds("-4,4"), Ok(Bounds { lo: -4.0, hi: 4.0 }));
        assert!(parse_bounds("4,-4").is_err());
        assert!(parse_bounds("1,2,3").is_err());
    }
}
