use crate::Hourly;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub(crate) fn squared_distance(a: &Hourly, b: &Hourly) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn lexicographic(a: &Hourly, b: &Hourly) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.total_cmp(y);
        if ord.is_ne() {
            return ord;
        }
    }
    core::cmp::Ordering::Equal
}
