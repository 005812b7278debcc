//! Piecewise-linear curves and the min-plus primitives built on them.
//!
//! Three kinds of curve live here:
//!
//! * [`ConcaveArrivalCurve`]: `α(t) = min_k (b_k + r_k t)` for `t > 0` and
//!   `α(0) = 0`. Concave, hence continuous everywhere except possibly at 0.
//! * [`RateLatencyCurve`]: `β(t) = max(0, R (t - T))`.
//! * [`CumulativeFunction`]: a left-continuous, wide-sense increasing
//!   function of time with jumps, used for the input `I`, the output `O`
//!   and the fluid functions of the worst-case construction. The value at
//!   `t` counts the bits strictly before `t`; a jump at `t` only shows up
//!   in the right-limit.

use std::cmp::Ordering;

use crate::{approx_eq, slack, Error, Result};

/// Evaluation interface shared by every curve type.
pub trait Curve {
    /// Value at `t` under the curve's continuity convention.
    fn eval(&self, t: f64) -> Result<f64>;

    /// `lim_{s -> t, s > t}` of the curve.
    fn right_limit(&self, t: f64) -> Result<f64>;
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}

fn check_quantity(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCurve(format!(
            "{what} must be finite and non-negative, got {v}"
        )))
    }
}

/// A token bucket `b + r t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffinePiece {
    pub burst: f64,
    pub rate: f64,
}

impl AffinePiece {
    pub fn new(burst: f64, rate: f64) -> Result<Self> {
        check_quantity("burst", burst)?;
        check_quantity("rate", rate)?;
        Ok(AffinePiece { burst, rate })
    }

    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        self.burst + self.rate * t
    }
}

/// Time at which `a` and `b` cross, for `a.rate > b.rate`.
fn crossing(a: &AffinePiece, b: &AffinePiece) -> f64 {
    (b.burst - a.burst) / (a.rate - b.rate)
}

/// Concave, wide-sense increasing arrival curve given as a minimum of
/// token buckets.
///
/// Construction normalizes the pieces: they are sorted by decreasing rate
/// and every piece that is nowhere the minimum on `t > 0` is dropped. After
/// normalization piece `k` is the active one on `[starts[k], starts[k+1])`,
/// bursts are strictly increasing and rates strictly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveArrivalCurve {
    pieces: Vec<AffinePiece>,
    starts: Vec<f64>,
}

impl ConcaveArrivalCurve {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidCurve(
                "arrival curve needs at least one piece".into(),
            ));
        }
        for p in &pieces {
            check_quantity("burst", p.burst)?;
            check_quantity("rate", p.rate)?;
        }

        let mut sorted = pieces;
        sorted.sort_by(|a, b| {
            b.rate
                .total_cmp(&a.rate)
                .then_with(|| a.burst.total_cmp(&b.burst))
        });
        sorted.dedup_by(|later, earlier| later.rate == earlier.rate);

        let mut hull: Vec<AffinePiece> = Vec::with_capacity(sorted.len());
        for p in sorted {
            while let Some(top) = hull.last() {
                // Lower rate and no larger burst: `top` is never the minimum.
                if p.burst <= top.burst {
                    hull.pop();
                    continue;
                }
                if hull.len() >= 2 {
                    let prev = &hull[hull.len() - 2];
                    if crossing(prev, &p) <= crossing(prev, top) {
                        hull.pop();
                        continue;
                    }
                }
                break;
            }
            hull.push(p);
        }

        let mut starts = Vec::with_capacity(hull.len());
        starts.push(0.0);
        starts.extend(hull.windows(2).map(|w| crossing(&w[0], &w[1])));
        Ok(ConcaveArrivalCurve {
            pieces: hull,
            starts,
        })
    }

    /// Single token bucket `b + r t`.
    pub fn token_bucket(burst: f64, rate: f64) -> Result<Self> {
        Self::new(vec![AffinePiece::new(burst, rate)?])
    }

    /// Normalized pieces, by decreasing rate.
    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    /// Start of the active interval of each piece; the first entry is 0.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    /// `α+(0)`, the instantaneous burst.
    pub fn burst(&self) -> f64 {
        self.pieces[0].burst
    }

    pub fn long_run_rate(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].rate
    }

    /// Index of the piece that is active at `t > 0`.
    fn active(&self, t: f64) -> usize {
        self.starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// `α(t)` for `t > 0`, or `α+(0)` at `t = 0`.
    pub(crate) fn right_value(&self, t: f64) -> f64 {
        self.pieces[self.active(t)].at(t)
    }

    /// Smallest `u >= 0` with `α+(u) >= x`, or `None` when `α` stays below `x`.
    pub fn inverse_right_limit(&self, x: f64) -> Option<f64> {
        if x <= self.burst() {
            return Some(0.0);
        }
        let last = self.pieces.len() - 1;
        for (k, p) in self.pieces.iter().enumerate() {
            if k == last || self.pieces[k + 1].at(self.starts[k + 1]) >= x {
                if p.rate == 0.0 {
                    return None;
                }
                return Some(((x - p.burst) / p.rate).max(self.starts[k]));
            }
        }
        None
    }
}

impl Curve for ConcaveArrivalCurve {
    fn eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 {
            Ok(0.0)
        } else {
            Ok(self.right_value(t))
        }
    }

    fn right_limit(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.right_value(t))
    }
}

/// `β(t) = max(0, R (t - T))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateLatencyCurve {
    rate: f64,
    latency: f64,
}

impl RateLatencyCurve {
    pub fn new(rate: f64, latency: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidCurve(format!(
                "service rate must be positive, got {rate}"
            )));
        }
        if !(latency.is_finite() && latency >= 0.0) {
            return Err(Error::InvalidCurve(format!(
                "service latency must be non-negative, got {latency}"
            )));
        }
        Ok(RateLatencyCurve { rate, latency })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn latency(&self) -> f64 {
        self.latency
    }

    #[inline]
    pub(crate) fn at(&self, t: f64) -> f64 {
        (self.rate * (t - self.latency)).max(0.0)
    }
}

impl Curve for RateLatencyCurve {
    fn eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.at(t))
    }

    fn right_limit(&self, t: f64) -> Result<f64> {
        self.eval(t)
    }
}

/// `β↑(y) = sup { s >= 0 | β(s) <= y } = y / R + T`.
pub fn upper_pseudo_inverse(beta: &RateLatencyCurve, y: f64) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::Domain(format!(
            "pseudo-inverse argument must be >= 0, got {y}"
        )));
    }
    Ok(y / beta.rate + beta.latency)
}

/// Result of [`sup_deviation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deviation {
    /// `sup_t (α+(t) - R t)` and its smallest maximizer.
    Bounded {
        sup: f64,
        at: f64,
    },
    Unbounded,
}

/// `sup_{t >= 0} (α+(t) - R t)`, which equals `sup_{t >= 0} (α(t) - R t)`.
///
/// The function being maximized is concave with slope `r_k - R` on the
/// active interval of piece `k`, so the smallest maximizer is the start of
/// the first piece whose rate does not exceed `R`.
pub fn sup_deviation(alpha: &ConcaveArrivalCurve, rate: f64) -> Result<Deviation> {
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::Domain(format!("rate must be positive, got {rate}")));
    }
    for (p, &start) in alpha.pieces.iter().zip(&alpha.starts) {
        if p.rate <= rate {
            return Ok(Deviation::Bounded {
                sup: p.burst + (p.rate - rate) * start,
                at: start,
            });
        }
    }
    Ok(Deviation::Unbounded)
}

/// One breakpoint of a [`CumulativeFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub time: f64,
    /// Left-limit at `time`, which is also the value there.
    pub value: f64,
    pub jump: f64,
    /// Slope on `(time, next breakpoint]`.
    pub slope: f64,
}

impl Breakpoint {
    #[inline]
    fn after(&self, t: f64) -> f64 {
        self.value + self.jump + self.slope * (t - self.time)
    }
}

/// Point where one cumulative function drops below another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shortfall {
    pub time: f64,
    pub value: f64,
    pub lower: f64,
}

/// Left-continuous, wide-sense increasing piecewise-linear function of time.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeFunction {
    points: Vec<Breakpoint>,
}

impl CumulativeFunction {
    /// Validates an explicit breakpoint list.
    pub fn new(points: Vec<Breakpoint>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidCurve("cumulative function needs a breakpoint".into()))?;
        if first.time != 0.0 {
            return Err(Error::InvalidCurve(format!(
                "first breakpoint must be at t = 0, got {}",
                first.time
            )));
        }
        for p in &points {
            if !p.time.is_finite() {
                return Err(Error::InvalidCurve(format!(
                    "breakpoint time {} is not finite",
                    p.time
                )));
            }
            check_quantity("value", p.value)?;
            check_quantity("jump", p.jump)?;
            check_quantity("slope", p.slope)?;
        }
        for w in points.windows(2) {
            if w[1].time <= w[0].time {
                return Err(Error::InvalidCurve(format!(
                    "breakpoint times must be strictly increasing ({} then {})",
                    w[0].time, w[1].time
                )));
            }
            let expected = w[0].after(w[1].time);
            if !approx_eq(expected, w[1].value) {
                return Err(Error::InvalidCurve(format!(
                    "value {} at t = {} does not continue the previous segment ({expected})",
                    w[1].value, w[1].time
                )));
            }
        }
        Ok(CumulativeFunction { points })
    }

    /// Builds a function that is 0 at `t = 0` from `(time, jump, slope-after)`
    /// triples with nondecreasing times. Entries at the same time are merged
    /// (jumps add, the last slope wins); a missing entry at 0 means a flat
    /// start.
    pub fn from_segments<I>(segments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let mut points: Vec<Breakpoint> = vec![Breakpoint {
            time: 0.0,
            value: 0.0,
            jump: 0.0,
            slope: 0.0,
        }];
        for (time, jump, slope) in segments {
            check_time(time)?;
            check_quantity("jump", jump)?;
            check_quantity("slope", slope)?;
            let last = points.last_mut().expect("nonempty");
            match time.partial_cmp(&last.time) {
                Some(Ordering::Equal) => {
                    last.jump += jump;
                    last.slope = slope;
                }
                Some(Ordering::Greater) => {
                    let value = last.after(time);
                    points.push(Breakpoint {
                        time,
                        value,
                        jump,
                        slope,
                    });
                }
                _ => {
                    return Err(Error::InvalidCurve(format!(
                        "segment times must be nondecreasing ({} then {time})",
                        last.time
                    )))
                }
            }
        }
        // Drop breakpoints that change nothing.
        let mut merged: Vec<Breakpoint> = Vec::with_capacity(points.len());
        for p in points {
            match merged.last() {
                Some(prev) if p.jump == 0.0 && p.slope == prev.slope => {}
                _ => merged.push(p),
            }
        }
        CumulativeFunction::new(merged)
    }

    /// Identically zero.
    pub fn zero() -> Self {
        CumulativeFunction {
            points: vec![Breakpoint {
                time: 0.0,
                value: 0.0,
                jump: 0.0,
                slope: 0.0,
            }],
        }
    }

    /// Staircase with the given `(time, jump)` steps.
    pub fn staircase(steps: &[(f64, f64)]) -> Result<Self> {
        Self::from_segments(steps.iter().map(|&(t, j)| (t, j, 0.0)))
    }

    pub fn points(&self) -> &[Breakpoint] {
        &self.points
    }

    pub fn final_slope(&self) -> f64 {
        self.points[self.points.len() - 1].slope
    }

    /// `lim_{t -> ∞}`, when finite.
    pub fn limit(&self) -> Option<f64> {
        let last = &self.points[self.points.len() - 1];
        (last.slope == 0.0).then_some(last.value + last.jump)
    }

    #[inline]
    pub(crate) fn at(&self, t: f64) -> f64 {
        let k = self.points.partition_point(|p| p.time < t);
        if k == 0 {
            self.points[0].value
        } else {
            self.points[k - 1].after(t)
        }
    }

    #[inline]
    pub(crate) fn right_at(&self, t: f64) -> f64 {
        let k = self.points.partition_point(|p| p.time <= t).max(1);
        self.points[k - 1].after(t)
    }

    /// `inf { t >= 0 | f+(t) >= x }`, or `None` when `f` never reaches `x`.
    /// Comparisons allow the crate tolerance so that thresholds computed as
    /// sums land on the intended instant.
    pub fn inverse_right_limit(&self, x: f64) -> Option<f64> {
        let target = x - slack(x);
        for (k, p) in self.points.iter().enumerate() {
            if p.value + p.jump >= target {
                return Some(p.time);
            }
            let reached = match self.points.get(k + 1) {
                Some(next) => next.value >= target,
                None => p.slope > 0.0,
            };
            if reached {
                let dt = (x - p.value - p.jump) / p.slope;
                let end = self.points.get(k + 1).map_or(f64::INFINITY, |n| n.time);
                return Some((p.time + dt.max(0.0)).min(end));
            }
        }
        None
    }

    /// First instant where `self` falls below `lower` by more than the
    /// tolerance. Both functions are linear between the union of their
    /// breakpoints, so checking values and right-limits there plus the tail
    /// slopes is exhaustive.
    pub fn first_shortfall(&self, lower: &CumulativeFunction) -> Option<Shortfall> {
        let mut times: Vec<f64> = self
            .points
            .iter()
            .chain(&lower.points)
            .map(|p| p.time)
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        for &t in &times {
            for (value, bound) in [
                (self.at(t), lower.at(t)),
                (self.right_at(t), lower.right_at(t)),
            ] {
                if value < bound - slack(bound) {
                    return Some(Shortfall {
                        time: t,
                        value,
                        lower: bound,
                    });
                }
            }
        }
        let last = *times.last().expect("nonempty");
        let gap_rate = lower.final_slope() - self.final_slope();
        if gap_rate > 0.0 {
            let gap = (self.right_at(last) - lower.right_at(last)).max(0.0);
            let t = last + gap / gap_rate + 1.0;
            return Some(Shortfall {
                time: t,
                value: self.at(t),
                lower: lower.at(t),
            });
        }
        None
    }
}

impl Curve for CumulativeFunction {
    fn eval(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.at(t))
    }

    fn right_limit(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.right_at(t))
    }
}

/// `F(t) = inf_{0 <= s <= t} { I(s) + β(t - s) }`.
///
/// For a rate-latency `β` this is `G(max(0, t - T))` with
/// `G(u) = R u + min_{s <= u} (I(s) - R s)`, so the work reduces to one
/// sweep that tracks the running minimum of `I(s) - R s`.
pub fn min_plus_convolve(
    input: &CumulativeFunction,
    beta: &RateLatencyCurve,
) -> Result<CumulativeFunction> {
    let pts = input.points();
    if pts[0].value != 0.0 {
        return Err(Error::InvalidCurve(format!(
            "convolution input must start at 0, got {}",
            pts[0].value
        )));
    }
    let rate = beta.rate();
    let mut slopes: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    let mut running_min = f64::INFINITY;
    for (k, p) in pts.iter().enumerate() {
        let h_left = p.value - rate * p.time;
        running_min = running_min.min(h_left);
        let h_right = h_left + p.jump;
        let descent = rate - p.slope;
        if descent <= 0.0 {
            slopes.push((p.time, rate));
            continue;
        }
        let end = pts.get(k + 1).map_or(f64::INFINITY, |n| n.time);
        let cross = p.time + (h_right - running_min).max(0.0) / descent;
        if cross < end {
            if cross > p.time {
                slopes.push((p.time, rate));
            }
            slopes.push((cross, p.slope));
        } else {
            slopes.push((p.time, rate));
        }
    }

    let latency = beta.latency();
    let mut segments: Vec<(f64, f64, f64)> = Vec::with_capacity(slopes.len() + 1);
    if latency > 0.0 {
        segments.push((0.0, 0.0, 0.0));
    }
    segments.extend(slopes.into_iter().map(|(t, s)| (t + latency, 0.0, s)));
    CumulativeFunction::from_segments(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tb(b: f64, r: f64) -> ConcaveArrivalCurve {
        ConcaveArrivalCurve::token_bucket(b, r).unwrap()
    }

    #[test]
    fn eval_conventions() {
        assert_eq!(tb(4000.0, 1000.0).eval(0.0).unwrap(), 0.0);
        let beta = RateLatencyCurve::new(2000.0, 0.01).unwrap();
        assert_eq!(beta.eval(0.01).unwrap(), 0.0);
        assert!((beta.eval(1.01).unwrap() - 2000.0).abs() < 1e-9);
        assert_eq!(beta.eval(-1.0), Err(Error::NegativeTime(-1.0)));
        assert!(tb(1.0, 1.0).eval(-0.5).is_err());
    }

    #[test]
    fn right_limits() {
        let a = tb(4000.0, 1000.0);
        assert_eq!(a.right_limit(0.0).unwrap(), 4000.0);
        assert_eq!(a.right_limit(2.0).unwrap(), 6000.0);
        assert_eq!(a.eval(2.0).unwrap(), 6000.0);

        let f = CumulativeFunction::staircase(&[(3.0, 1500.0)]).unwrap();
        assert_eq!(f.eval(3.0).unwrap(), 0.0);
        assert_eq!(f.right_limit(3.0).unwrap(), 1500.0);
        assert_eq!(f.eval(3.5).unwrap(), 1500.0);
    }

    #[test]
    fn pseudo_inverse_closed_form() {
        let beta = RateLatencyCurve::new(2000.0, 0.01).unwrap();
        assert_eq!(upper_pseudo_inverse(&beta, 0.0).unwrap(), 0.01);
        assert!((upper_pseudo_inverse(&beta, 2000.0).unwrap() - 1.01).abs() < 1e-12);
        let unit = RateLatencyCurve::new(1.0, 0.0).unwrap();
        assert_eq!(upper_pseudo_inverse(&unit, 5.0).unwrap(), 5.0);
        assert!(matches!(
            upper_pseudo_inverse(&beta, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sup_deviation_examples() {
        assert_eq!(
            sup_deviation(&tb(4000.0, 1000.0), 2000.0).unwrap(),
            Deviation::Bounded {
                sup: 4000.0,
                at: 0.0
            }
        );
        assert_eq!(
            sup_deviation(&tb(0.0, 2000.0), 2000.0).unwrap(),
            Deviation::Bounded { sup: 0.0, at: 0.0 }
        );
        assert_eq!(
            sup_deviation(&tb(4000.0, 1000.0), 500.0).unwrap(),
            Deviation::Unbounded
        );

        let two = ConcaveArrivalCurve::new(vec![
            AffinePiece::new(1000.0, 1500.0).unwrap(),
            AffinePiece::new(4000.0, 500.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(
            sup_deviation(&two, 1000.0).unwrap(),
            Deviation::Bounded {
                sup: 2500.0,
                at: 3.0
            }
        );
    }

    #[test]
    fn normalization_drops_dominated_pieces() {
        let a = ConcaveArrivalCurve::new(vec![
            AffinePiece::new(8000.0, 100.0).unwrap(),
            AffinePiece::new(1000.0, 1500.0).unwrap(),
            AffinePiece::new(6000.0, 2000.0).unwrap(), // never the minimum
            AffinePiece::new(4000.0, 500.0).unwrap(),
            AffinePiece::new(3000.0, 1500.0).unwrap(), // same rate, larger burst
        ])
        .unwrap();
        let rates: Vec<f64> = a.pieces().iter().map(|p| p.rate).collect();
        assert_eq!(rates, vec![1500.0, 500.0, 100.0]);
        assert_eq!(a.starts()[0], 0.0);
        assert_eq!(a.starts()[1], 3.0);
        assert_eq!(a.starts()[2], 10.0);

        let dominated = ConcaveArrivalCurve::new(vec![
            AffinePiece::new(1000.0, 1500.0).unwrap(),
            AffinePiece::new(4000.0, 500.0).unwrap(),
            AffinePiece::new(5000.0, 100.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(dominated.pieces().len(), 2);
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(ConcaveArrivalCurve::new(vec![]).is_err());
        assert!(AffinePiece::new(-1.0, 1.0).is_err());
        assert!(AffinePiece::new(1.0, f64::NAN).is_err());
        assert!(RateLatencyCurve::new(0.0, 1.0).is_err());
        assert!(RateLatencyCurve::new(1.0, -1.0).is_err());
        assert!(CumulativeFunction::new(vec![Breakpoint {
            time: 1.0,
            value: 0.0,
            jump: 0.0,
            slope: 0.0
        }])
        .is_err());
        assert!(CumulativeFunction::from_segments([(2.0, 1.0, 0.0), (1.0, 1.0, 0.0)]).is_err());
    }

    #[test]
    fn inverse_right_limit_of_arrival_curve() {
        let a = ConcaveArrivalCurve::new(vec![
            AffinePiece::new(1000.0, 1500.0).unwrap(),
            AffinePiece::new(4000.0, 500.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(a.inverse_right_limit(800.0), Some(0.0));
        assert_eq!(a.inverse_right_limit(2500.0), Some(1.0));
        assert_eq!(a.inverse_right_limit(6000.0), Some(4.0));
        assert_eq!(tb(10.0, 0.0).inverse_right_limit(11.0), None);
    }

    #[test]
    fn convolution_single_jump() {
        let input = CumulativeFunction::staircase(&[(0.0, 3000.0)]).unwrap();
        let beta = RateLatencyCurve::new(2000.0, 0.01).unwrap();
        let f = min_plus_convolve(&input, &beta).unwrap();
        assert_eq!(f.eval(0.0).unwrap(), 0.0);
        assert_eq!(f.eval(0.01).unwrap(), 0.0);
        assert!((f.eval(0.51).unwrap() - 1000.0).abs() < 1e-9);
        assert!((f.eval(1.51).unwrap() - 3000.0).abs() < 1e-9);
        assert!((f.eval(10.0).unwrap() - 3000.0).abs() < 1e-9);
        assert_eq!(f.limit(), Some(f.eval(10.0).unwrap()));
    }

    #[test]
    fn convolution_of_zero_is_zero() {
        let beta = RateLatencyCurve::new(2000.0, 0.01).unwrap();
        let f = min_plus_convolve(&CumulativeFunction::zero(), &beta).unwrap();
        assert_eq!(f.limit(), Some(0.0));
        assert!(f
            .points()
            .iter()
            .all(|p| p.value == 0.0 && p.jump == 0.0 && p.slope == 0.0));
    }

    #[test]
    fn convolution_two_jumps() {
        let input = CumulativeFunction::staircase(&[(0.0, 1000.0), (5.0, 1000.0)]).unwrap();
        let beta = RateLatencyCurve::new(1000.0, 0.0).unwrap();
        let f = min_plus_convolve(&input, &beta).unwrap();
        let expect = |t: f64| -> f64 {
            if t <= 1.0 {
                1000.0 * t
            } else if t <= 5.0 {
                1000.0
            } else if t <= 6.0 {
                1000.0 + 1000.0 * (t - 5.0)
            } else {
                2000.0
            }
        };
        for i in 0..=700 {
            let t = i as f64 * 0.01;
            assert!((f.eval(t).unwrap() - expect(t)).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn convolution_input_must_start_at_zero() {
        let shifted = CumulativeFunction::new(vec![Breakpoint {
            time: 0.0,
            value: 5.0,
            jump: 0.0,
            slope: 0.0,
        }])
        .unwrap();
        let beta = RateLatencyCurve::new(1.0, 0.0).unwrap();
        assert!(min_plus_convolve(&shifted, &beta).is_err());
    }

    #[test]
    fn shortfall_detects_tail_growth() {
        let flat = CumulativeFunction::staircase(&[(0.0, 10.0)]).unwrap();
        let ramp = CumulativeFunction::from_segments([(0.0, 0.0, 1.0)]).unwrap();
        let s = flat.first_shortfall(&ramp).unwrap();
        assert!(s.value < s.lower);
        assert!(ramp.first_shortfall(&CumulativeFunction::zero()).is_none());
    }

    #[test]
    fn fluid_inverse_of_ramp() {
        let ramp =
            CumulativeFunction::from_segments([(0.0, 0.0, 2000.0), (1.0, 0.0, 0.0)]).unwrap();
        assert_eq!(ramp.inverse_right_limit(1000.0), Some(0.5));
        assert_eq!(ramp.inverse_right_limit(2000.0), Some(1.0));
        assert_eq!(ramp.inverse_right_limit(2001.0), None);
    }
}
