use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Snapping grid for floating inputs: denominators divide `2^40`.
const SNAP_BITS: i32 = 40;

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl QPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(x)), BigRational::from_integer(BigInt::from(y)))
    }

    /// Rounds each coordinate to the nearest multiple of `2^-40`.
    pub fn snapped(x: f64, y: f64) -> Option<Self> {
        Some(Self::new(snap(x)?, snap(y)?))
    }

    /// The exact dyadic value of the doubles, without rounding.
    pub fn from_f64_exact(x: f64, y: f64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(x)?, BigRational::from_float(y)?))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }

    pub fn sub(&self, o: &Self) -> (BigRational, BigRational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

fn snap(v: f64) -> Option<BigRational> {
    if !v.is_finite() {
        return None;
    }
    let scaled = libm::round(libm::ldexp(v, SNAP_BITS));
    let num = BigInt::from(scaled as i128);
    Some(BigRational::new(num, BigInt::one() << SNAP_BITS as usize))
}

pub(crate) fn cross(u: &(BigRational, BigRational), v: &(BigRational, BigRational)) -> BigRational {
    &u.0 * &v.1 - &u.1 * &v.0
}

pub(crate) fn sign(v: &BigRational) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of the signed area of triangle `a b c`.
pub(crate) fn orient(a: &QPoint, b: &QPoint, c: &QPoint) -> i8 {
    sign(&cross(&b.sub(a), &c.sub(a)))
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub(crate) fn on_segment(p: &QPoint, a: &QPoint, b: &QPoint) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub(crate) fn segments_meet(a: &QPoint, b: &QPoint, c: &QPoint, d: &QPoint) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
}

/// Whether the closed chain through `pts` is a simple counter-clockwise
/// polygon: sides meet only at shared corners and the signed area is positive.
pub(crate) fn simple_ccw(pts: &[QPoint]) -> bool {
    let m = pts.len();
    if m < 3 {
        return false;
    }
    for i in 0..m {
        let (a, b, c) = (&pts[i], &pts[(i + 1) % m], &pts[(i + 2) % m]);
        if a == b {
            return false;
        }
        // adjacent sides may not fold back onto each other
        if orient(a, b, c) == 0 && sign(&dot(&a.sub(b), &c.sub(b))) > 0 {
            return false;
        }
    }
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if segments_meet(&pts[i], &pts[(i + 1) % m], &pts[j], &pts[(j + 1) % m]) {
                return false;
            }
        }
    }
    let mut area = BigRational::zero();
    for i in 0..m {
        let (a, b) = (&pts[i], &pts[(i + 1) % m]);
        area += &a.x * &b.y - &a.y * &b.x;
    }
    area.is_positive()
}

fn dot(u: &(BigRational, BigRational), v: &(BigRational, BigRational)) -> BigRational {
    &u.0 * &v.0 + &u.1 * &v.1
}

/// Parses `"p/q"`, an integer, or a plain decimal literal exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(at) => (&body[..at], body[at + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut digits = int_part.to_string();
    digits.push_str(frac_part);
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_exactly() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(parse_rational("1/2"), Some(half.clone()));
        assert_eq!(parse_rational("0.5"), Some(half.clone()));
        assert_eq!(parse_rational("-0.5"), Some(-half));
        assert_eq!(parse_rational("2.5e1"), Some(BigRational::from_integer(25.into())));
        assert_eq!(parse_rational("3"), Some(BigRational::from_integer(3.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn snapping_is_dyadic() {
        let p = QPoint::snapped(0.1, -2.0).unwrap();
        assert_eq!(p.y, BigRational::from_integer((-2).into()));
        assert!(p.x.denom() <= &(BigInt::one() << 40usize));
        assert!((p.to_f64().0 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn segment_predicates() {
        let a = QPoint::from_ints(0, 0);
        let b = QPoint::from_ints(2, 2);
        let c = QPoint::from_ints(0, 2);
        let d = QPoint::from_ints(2, 0);
        assert!(segments_meet(&a, &b, &c, &d));
        assert!(on_segment(&QPoint::from_ints(1, 1), &a, &b));
        assert!(!segments_meet(&a, &c, &d, &b));
        assert_eq!(orient(&a, &d, &b), 1);
    }
}
