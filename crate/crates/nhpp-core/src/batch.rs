//! Batch sampling: many independent draws from per-row piecewise-constant
//! rates, stored densely.
//!
//! Each row of a [`RateMatrix`] describes one process on a shared interval
//! split into equal-width cells. Rows are sampled from per-row substreams
//! keyed by row index, so results are identical whether rows are processed
//! sequentially or concurrently, and depend only on the parent stream state
//! at the call.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::general::ThinningStats;
use crate::rng::RngStream;
use crate::types::{sort_times, Interval, SamplerOptions};

/// Whole-row retry budget for at-least-one thinning rows.
const AT_LEAST_ONE_RETRY_CAP: u32 = 1_000_000;
const DOMINANCE_SLACK: f64 = 1e-12;

/// `rows` independent piecewise-constant rate functions on a shared interval
/// with `cols` equal-width cells, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    rows: usize,
    cols: usize,
    interval: Interval,
    data: Vec<f64>,
}

impl RateMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>, interval: Interval) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain("a rate matrix needs at least one row and column"));
        }
        if data.len() != rows * cols {
            return Err(Error::Domain("rate matrix data length must be rows * cols"));
        }
        if data.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain("rates must be finite and non-negative"));
        }
        if interval.is_empty() {
            return Err(Error::Domain("rate matrix interval must have positive width"));
        }
        Ok(RateMatrix { rows, cols, interval, data })
    }

    /// Replicates one rate row `rows` times.
    pub fn broadcast(row: &[f64], rows: usize, interval: Interval) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * row.len());
        for _ in 0..rows {
            data.extend_from_slice(row);
        }
        Self::new(rows, row.len(), data, interval)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn cell_width(&self) -> f64 {
        self.interval.width() / self.cols as f64
    }
}

/// Event times for many independent draws, one series per row.
///
/// Rows are padded on the right with NaN up to the widest row, mirroring a
/// rectangular layout with missing values; an all-empty batch has zero
/// columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EventMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl EventMatrix {
    fn from_jagged(rows: Vec<Vec<f64>>) -> Self {
        let n_rows = rows.len();
        let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
        let mut data = vec![f64::NAN; n_rows * cols];
        for (i, row) in rows.iter().enumerate() {
            data[i * cols..i * cols + row.len()].copy_from_slice(row);
        }
        EventMatrix { rows: n_rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Full padded row, NaN tail included.
    pub fn row_padded(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// The events of row `i`, without padding.
    pub fn row_events(&self, i: usize) -> &[f64] {
        let row = self.row_padded(i);
        let end = row.iter().position(|v| v.is_nan()).unwrap_or(row.len());
        &row[..end]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row_events(i))
    }
}

/// Walks a piecewise-constant mass table left to right, inverting a
/// non-decreasing sequence of mass coordinates into times.
struct RowWalker<'a> {
    values: &'a [f64],
    start: f64,
    end: f64,
    width: f64,
    cell: usize,
    mass_before: f64,
}

impl<'a> RowWalker<'a> {
    fn new(values: &'a [f64], interval: Interval) -> Self {
        RowWalker {
            values,
            start: interval.start(),
            end: interval.end(),
            width: interval.width() / values.len() as f64,
            cell: 0,
            mass_before: 0.0,
        }
    }

    fn total_mass(values: &[f64], width: f64) -> f64 {
        values.iter().sum::<f64>() * width
    }

    /// Inverts `z` (must be non-decreasing across calls) and reports the
    /// rate of the receiving cell.
    fn invert_next(&mut self, z: f64) -> (f64, f64) {
        loop {
            if self.cell >= self.values.len() {
                return (self.end, *self.values.last().unwrap());
            }
            let v = self.values[self.cell];
            let step = v * self.width;
            if z > self.mass_before + step {
                self.mass_before += step;
                self.cell += 1;
                continue;
            }
            let left = self.start + self.cell as f64 * self.width;
            if v == 0.0 || z <= self.mass_before {
                return (left, v);
            }
            return (left + (z - self.mass_before) / v, v);
        }
    }
}

/// Batch counterpart of [`crate::special::draw_step_regular`]: row `i` is an
/// independent draw from the rates in row `i`.
///
/// `at_least_1` conditions every row on being non-empty and fails on any
/// zero-mass row, naming it.
pub fn draw_step_regular_batch(
    stream: &mut RngStream,
    rates: &RateMatrix,
    opts: SamplerOptions,
) -> Result<EventMatrix> {
    let family = stream.split_off();
    let width = rates.cell_width();
    let cap = opts.cap();
    if cap == Some(1) && !opts.at_least_1 {
        return first_event_batch(&family, rates, width);
    }
    let mut out = Vec::with_capacity(rates.rows());
    for i in 0..rates.rows() {
        let mut rs = family.member(i as u64);
        let values = rates.row(i);
        let row = if opts.at_least_1 {
            let mass = RowWalker::total_mass(values, width);
            if mass <= 0.0 {
                return Err(Error::ImpossibleConditionAt {
                    row: i,
                    reason: "row carries no intensity mass",
                });
            }
            let n = rs.truncated_poisson(mass, 1)? as usize;
            let mut z: Vec<f64> = (0..n).map(|_| mass - mass * rs.uniform01()).collect();
            sort_times(&mut z);
            let mut walker = RowWalker::new(values, rates.interval());
            let mut times: Vec<f64> = z.iter().map(|&z| walker.invert_next(z).0).collect();
            if let Some(k) = cap {
                times.truncate(k);
            }
            times
        } else {
            sample_row_inversion(&mut rs, values, rates.interval(), width, cap)?
        };
        out.push(row);
    }
    Ok(EventMatrix::from_jagged(out))
}

/// Allocation-free fast path for earliest-event batches: one exponential
/// per row, inverted by a lazy walk that stops at the receiving cell.
/// Draws exactly what the general path would, so results are bit-identical.
fn first_event_batch(
    family: &crate::rng::StreamFamily,
    rates: &RateMatrix,
    width: f64,
) -> Result<EventMatrix> {
    let rows = rates.rows();
    let start = rates.interval().start();
    let mut data = vec![f64::NAN; rows];
    let mut any = false;
    for i in 0..rows {
        let mut rs = family.member(i as u64);
        let target = rs.exponential(1.0)?;
        let mut acc = 0.0;
        for (m, &v) in rates.row(i).iter().enumerate() {
            let step = v * width;
            if v > 0.0 && target <= acc + step {
                data[i] = start + m as f64 * width + (target - acc) / v;
                any = true;
                break;
            }
            acc += step;
        }
    }
    if any {
        Ok(EventMatrix { rows, cols: 1, data })
    } else {
        Ok(EventMatrix { rows, cols: 0, data: Vec::new() })
    }
}

fn sample_row_inversion(
    rs: &mut RngStream,
    values: &[f64],
    interval: Interval,
    width: f64,
    cap: Option<usize>,
) -> Result<Vec<f64>> {
    let total = RowWalker::total_mass(values, width);
    let mut walker = RowWalker::new(values, interval);
    let mut times = Vec::new();
    let mut z = 0.0;
    loop {
        if cap.is_some_and(|k| times.len() >= k) {
            break;
        }
        z += rs.exponential(1.0)?;
        if z > total {
            break;
        }
        times.push(walker.invert_next(z).0);
    }
    Ok(times)
}

/// Batch thinning: row `i` draws proposals from its majorizer rates and
/// keeps proposal `z` with probability `lambda(i, z) / majorizer_i(z)`.
pub fn draw_intensity_step_regular_batch<F: Fn(usize, f64) -> f64>(
    stream: &mut RngStream,
    lambda: F,
    majorizer_rates: &RateMatrix,
    opts: SamplerOptions,
) -> Result<EventMatrix> {
    Ok(draw_intensity_step_regular_batch_traced(stream, lambda, majorizer_rates, opts)?.0)
}

/// [`draw_intensity_step_regular_batch`] plus pooled proposal/acceptance
/// counts across all rows.
pub fn draw_intensity_step_regular_batch_traced<F: Fn(usize, f64) -> f64>(
    stream: &mut RngStream,
    lambda: F,
    majorizer_rates: &RateMatrix,
    opts: SamplerOptions,
) -> Result<(EventMatrix, ThinningStats)> {
    let family = stream.split_off();
    let width = majorizer_rates.cell_width();
    let interval = majorizer_rates.interval();
    let cap = opts.cap();
    let mut stats = ThinningStats::default();
    let mut out = Vec::with_capacity(majorizer_rates.rows());
    for i in 0..majorizer_rates.rows() {
        let mut rs = family.member(i as u64);
        let values = majorizer_rates.row(i);
        let total = RowWalker::total_mass(values, width);

        let row = if opts.at_least_1 {
            if total <= 0.0 {
                return Err(Error::ImpossibleConditionAt {
                    row: i,
                    reason: "majorizer row carries no intensity mass",
                });
            }
            let mut kept = Vec::new();
            let mut tries = 0;
            while kept.is_empty() {
                tries += 1;
                if tries > AT_LEAST_ONE_RETRY_CAP {
                    return Err(Error::NonConvergence { iterations: AT_LEAST_ONE_RETRY_CAP });
                }
                let n = rs.truncated_poisson(total, 1)? as usize;
                let mut z: Vec<f64> = (0..n).map(|_| total - total * rs.uniform01()).collect();
                sort_times(&mut z);
                let mut walker = RowWalker::new(values, interval);
                for &zi in &z {
                    let (t, bound) = walker.invert_next(zi);
                    stats.proposals += 1;
                    if thin_row(&mut rs, &lambda, i, t, bound, &mut stats)? {
                        kept.push(t);
                    }
                }
            }
            if let Some(k) = cap {
                kept.truncate(k);
            }
            kept
        } else {
            let mut kept = Vec::new();
            let mut walker = RowWalker::new(values, interval);
            let mut z = 0.0;
            loop {
                if cap.is_some_and(|k| kept.len() >= k) {
                    break;
                }
                z += rs.exponential(1.0)?;
                if z > total {
                    break;
                }
                let (t, bound) = walker.invert_next(z);
                stats.proposals += 1;
                if thin_row(&mut rs, &lambda, i, t, bound, &mut stats)? {
                    kept.push(t);
                }
            }
            kept
        };
        out.push(row);
    }
    Ok((EventMatrix::from_jagged(out), stats))
}

fn thin_row<F: Fn(usize, f64) -> f64>(
    rs: &mut RngStream,
    lambda: &F,
    row: usize,
    t: f64,
    bound: f64,
    stats: &mut ThinningStats,
) -> Result<bool> {
    let lam = lambda(row, t);
    if !lam.is_finite() || lam < 0.0 {
        return Err(Error::Domain("intensity must evaluate finite and non-negative"));
    }
    if lam > bound * (1.0 + DOMINANCE_SLACK) {
        return Err(Error::MajorizationViolation {
            t,
            lambda: lam,
            majorizer: bound,
            row: Some(row),
        });
    }
    if bound == 0.0 {
        return Ok(false);
    }
    if rs.uniform01() < lam / bound {
        stats.accepted += 1;
        Ok(true)
    } else {
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::kolmogorov_survival;
    use crate::special;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    fn two_sample_ks_p(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
        a.sort_unstable_by(f64::total_cmp);
        b.sort_unstable_by(f64::total_cmp);
        let (n, m) = (a.len() as f64, b.len() as f64);
        let mut d: f64 = 0.0;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / n - j as f64 / m).abs());
        }
        let ne = libm::sqrt(n * m / (n + m));
        kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)
    }

    #[test]
    fn matrix_validation() {
        assert!(RateMatrix::new(0, 1, vec![], iv(0.0, 1.0)).is_err());
        assert!(RateMatrix::new(1, 2, vec![1.0], iv(0.0, 1.0)).is_err());
        assert!(RateMatrix::new(1, 2, vec![1.0, -1.0], iv(0.0, 1.0)).is_err());
        assert!(RateMatrix::new(1, 1, vec![1.0], iv(2.0, 2.0)).is_err());
    }

    #[test]
    fn all_zero_rates_give_zero_columns() {
        let rates = RateMatrix::new(3, 2, vec![0.0; 6], iv(0.0, 1.0)).unwrap();
        let mut s = RngStream::new(40);
        let events = draw_step_regular_batch(&mut s, &rates, SamplerOptions::DEFAULT).unwrap();
        assert_eq!((events.rows(), events.cols()), (3, 0));
        for row in events.iter_rows() {
            assert!(row.is_empty());
        }
    }

    #[test]
    fn rows_are_sorted_contained_and_suffix_padded() {
        let mut s = RngStream::new(41);
        let mut vals = Vec::new();
        for i in 0..20 {
            vals.push(0.3 + 0.1 * (i % 5) as f64);
        }
        let rates = RateMatrix::new(4, 5, vals, iv(1.0, 4.0)).unwrap();
        let events = draw_step_regular_batch(&mut s, &rates, SamplerOptions::DEFAULT).unwrap();
        assert_eq!(events.rows(), 4);
        for i in 0..4 {
            let row = events.row_events(i);
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            assert!(row.iter().all(|&t| t > 1.0 && t <= 4.0));
            // Padding is a NaN suffix only.
            let padded = events.row_padded(i);
            assert!(padded[row.len()..].iter().all(|v| v.is_nan()));
        }
    }

    #[test]
    fn deterministic_under_identical_parent_state() {
        let rates = RateMatrix::broadcast(&[1.0, 2.0], 5, iv(0.0, 2.0)).unwrap();
        let mut s1 = RngStream::new(42);
        let mut s2 = RngStream::new(42);
        let a = draw_step_regular_batch(&mut s1, &rates, SamplerOptions::DEFAULT).unwrap();
        let b = draw_step_regular_batch(&mut s2, &rates, SamplerOptions::DEFAULT).unwrap();
        assert_eq!(a.rows(), b.rows());
        for i in 0..a.rows() {
            assert_eq!(a.row_events(i), b.row_events(i));
        }
        // Consecutive batches from one stream differ.
        let c = draw_step_regular_batch(&mut s1, &rates, SamplerOptions::DEFAULT).unwrap();
        let differs = (0..a.rows()).any(|i| a.row_events(i) != c.row_events(i));
        assert!(differs);
    }

    #[test]
    fn single_row_matches_scalar_sampler_in_distribution() {
        let values = [1.0, 2.0, 0.5];
        let interval = iv(0.0, 3.0);
        let rates = RateMatrix::broadcast(&values, 1, interval).unwrap();
        let mut s = RngStream::new(43);
        let mut batch_times = Vec::new();
        let mut scalar_times = Vec::new();
        for _ in 0..4000 {
            let m = draw_step_regular_batch(&mut s, &rates, SamplerOptions::DEFAULT).unwrap();
            batch_times.extend_from_slice(m.row_events(0));
            scalar_times.extend_from_slice(
                special::draw_step_regular(&mut s, &values, interval, SamplerOptions::DEFAULT)
                    .unwrap()
                    .times(),
            );
        }
        let p = two_sample_ks_p(batch_times, scalar_times);
        assert!(p > 0.01, "batch vs scalar KS p = {p}");
    }

    #[test]
    fn row_counts_are_uncorrelated() {
        let rates = RateMatrix::broadcast(&[2.0, 2.0], 2, iv(0.0, 5.0)).unwrap();
        let runs = 1000;
        let mut xs = Vec::with_capacity(runs);
        let mut ys = Vec::with_capacity(runs);
        let mut s = RngStream::new(44);
        for _ in 0..runs {
            let m = draw_step_regular_batch(&mut s, &rates, SamplerOptions::DEFAULT).unwrap();
            xs.push(m.row_events(0).len() as f64);
            ys.push(m.row_events(1).len() as f64);
        }
        let mx = xs.iter().sum::<f64>() / runs as f64;
        let my = ys.iter().sum::<f64>() / runs as f64;
        let mut cov = 0.0;
        let mut vx = 0.0;
        let mut vy = 0.0;
        for i in 0..runs {
            cov += (xs[i] - mx) * (ys[i] - my);
            vx += (xs[i] - mx) * (xs[i] - mx);
            vy += (ys[i] - my) * (ys[i] - my);
        }
        let corr = cov / libm::sqrt(vx * vy);
        assert!(corr.abs() < 0.05, "row correlation {corr}");
    }

    #[test]
    fn at_least_one_rows_and_zero_mass_row_error() {
        let rates = RateMatrix::broadcast(&[0.01, 0.02], 6, iv(0.0, 1.0)).unwrap();
        let mut s = RngStream::new(45);
        for _ in 0..300 {
            let m = draw_step_regular_batch(&mut s, &rates, SamplerOptions::at_least_one())
                .unwrap();
            for row in m.iter_rows() {
                assert!(!row.is_empty());
            }
        }
        let with_zero =
            RateMatrix::new(2, 2, vec![1.0, 1.0, 0.0, 0.0], iv(0.0, 1.0)).unwrap();
        match draw_step_regular_batch(&mut s, &with_zero, SamplerOptions::at_least_one()) {
            Err(Error::ImpossibleConditionAt { row, .. }) => assert_eq!(row, 1),
            other => panic!("expected a row-named error, got {other:?}"),
        }
    }

    #[test]
    fn at_most_one_gives_single_column() {
        let rates = RateMatrix::broadcast(&[3.0, 3.0], 8, iv(0.0, 4.0)).unwrap();
        let mut s = RngStream::new(46);
        let m = draw_step_regular_batch(&mut s, &rates, SamplerOptions::at_most_one()).unwrap();
        assert!(m.cols() <= 1);
        for row in m.iter_rows() {
            assert!(row.len() <= 1);
        }
    }

    #[test]
    fn degenerate_batch_thinning_accepts_everything() {
        let rates = RateMatrix::broadcast(&[1.5, 1.5], 50, iv(0.0, 2.0)).unwrap();
        let mut s = RngStream::new(47);
        let (m, stats) = draw_intensity_step_regular_batch_traced(
            &mut s,
            |_, _| 1.5,
            &rates,
            SamplerOptions::DEFAULT,
        )
        .unwrap();
        assert_eq!(stats.proposals, stats.accepted);
        let kept: u64 = m.iter_rows().map(|r| r.len() as u64).sum();
        assert_eq!(kept, stats.accepted);
    }

    #[test]
    fn batch_thinning_violation_names_row_and_time() {
        let rates = RateMatrix::broadcast(&[1.0], 3, iv(0.0, 50.0)).unwrap();
        let mut s = RngStream::new(48);
        match draw_intensity_step_regular_batch(
            &mut s,
            |row, _| if row == 2 { 2.0 } else { 0.5 },
            &rates,
            SamplerOptions::DEFAULT,
        ) {
            Err(Error::MajorizationViolation { row: Some(2), t, .. }) => assert!(t > 0.0),
            other => panic!("expected a violation naming row 2, got {other:?}"),
        }
    }

    #[test]
    fn single_row_thinning_matches_scalar_thinning() {
        let interval = iv(0.0, 3.0);
        let maj_values = [1.0, 1.0, 1.0];
        let rates = RateMatrix::broadcast(&maj_values, 1, interval).unwrap();
        let lam = |t: f64| 0.5 + 0.1 * t;
        let mut s = RngStream::new(49);
        let maj_spec =
            crate::intensity::IntensitySpec::step_regular(maj_values.to_vec(), interval).unwrap();
        let mut batch_times = Vec::new();
        let mut scalar_times = Vec::new();
        for _ in 0..4000 {
            let m = draw_intensity_step_regular_batch(
                &mut s,
                |_, t| lam(t),
                &rates,
                SamplerOptions::DEFAULT,
            )
            .unwrap();
            batch_times.extend_from_slice(m.row_events(0));
            scalar_times.extend_from_slice(
                crate::general::draw_thinning(
                    &mut s,
                    lam,
                    &maj_spec,
                    interval,
                    SamplerOptions::DEFAULT,
                )
                .unwrap()
                .times(),
            );
        }
        let p = two_sample_ks_p(batch_times, scalar_times);
        assert!(p > 0.01, "batch vs scalar thinning KS p = {p}");
    }

    #[test]
    fn at_least_one_batch_thinning() {
        let rates = RateMatrix::broadcast(&[0.2, 0.2], 10, iv(0.0, 1.0)).unwrap();
        let mut s = RngStream::new(50);
        for _ in 0..100 {
            let m = draw_intensity_step_regular_batch(
                &mut s,
                |_, _| 0.1,
                &rates,
                SamplerOptions::at_least_one(),
            )
            .unwrap();
            for row in m.iter_rows() {
                assert!(!row.is_empty());
            }
        }
    }
}
