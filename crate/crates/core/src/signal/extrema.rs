//! Strict local extrema with plateau handling and prominence filtering.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    LocalMin,
    LocalMax,
}

/// Extrema of one series. `frames` are indices into the series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremaIndex {
    pub series_id: String,
    pub kind: ExtremumKind,
    pub frames: Vec<usize>,
}

impl ExtremaIndex {
    pub fn contains(&self, idx: usize) -> bool {
        self.frames.binary_search(&idx).is_ok()
    }
}

/// Finds strict local extrema of `series`.
///
/// A flat plateau bounded on both sides by lower (for maxima) values counts
/// once, at its center, rounding down. Plateaus touching either end of the
/// series are not extrema. NaN values never take part in an extremum.
pub fn find_extrema(series: &[f64], kind: ExtremumKind, min_prominence: f64) -> ExtremaIndex {
    let flipped: Vec<f64>;
    let xs = match kind {
        ExtremumKind::LocalMax => series,
        ExtremumKind::LocalMin => {
            flipped = series.iter().map(|v| -v).collect();
            &flipped
        }
    };
    let frames = local_maxima(xs)
        .into_iter()
        .filter(|&p| min_prominence <= 0.0 || prominence(xs, p) >= min_prominence)
        .collect();
    ExtremaIndex {
        series_id: String::new(),
        kind,
        frames,
    }
}

fn local_maxima(xs: &[f64]) -> Vec<usize> {
    let n = xs.len();
    let mut peaks = Vec::new();
    if n < 3 {
        return peaks;
    }
    let mut i = 1;
    while i < n - 1 {
        if xs[i - 1] < xs[i] {
            let mut ahead = i + 1;
            while ahead < n - 1 && xs[ahead] == xs[i] {
                ahead += 1;
            }
            if xs[ahead] < xs[i] {
                peaks.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    peaks
}

/// Height of the peak above the higher of its two bases.
fn prominence(xs: &[f64], peak: usize) -> f64 {
    let h = xs[peak];
    let mut left_min = h;
    for &v in xs[..peak].iter().rev() {
        if v > h {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = h;
    for &v in &xs[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn by_inspection() {
        let r = find_extrema(&[0.0, 1.0, 0.0, 2.0, 0.0], ExtremumKind::LocalMax, 0.5);
        assert_eq!(r.frames, vec![1, 3]);
    }

    #[test]
    fn monotone_has_none() {
        let s: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(find_extrema(&s, ExtremumKind::LocalMax, 0.0).frames.is_empty());
        assert!(find_extrema(&s, ExtremumKind::LocalMin, 0.0).frames.is_empty());
    }

    #[test]
    fn plateau_center() {
        let r = find_extrema(&[0.0, 3.0, 3.0, 3.0, 0.0], ExtremumKind::LocalMax, 0.0);
        assert_eq!(r.frames, vec![2]);
        let r = find_extrema(&[0.0, 3.0, 3.0, 0.0], ExtremumKind::LocalMax, 0.0);
        assert_eq!(r.frames, vec![1]);
    }

    #[test]
    fn prominence_filters_small_bumps() {
        let s = [0.0, 5.0, 4.8, 4.9, 0.0];
        let r = find_extrema(&s, ExtremumKind::LocalMax, 1.0);
        assert_eq!(r.frames, vec![1]);
    }

    #[test]
    fn nan_blocks_extrema() {
        let s = [0.0, f64::NAN, 0.0, 1.0, 0.0];
        assert_eq!(find_extrema(&s, ExtremumKind::LocalMax, 0.0).frames, vec![3]);
    }

    proptest! {
        #[test]
        fn min_is_max_of_negation(s in prop::collection::vec(-10i32..10, 0..60), prom in 0.0f64..3.0) {
            let xs: Vec<f64> = s.iter().map(|v| *v as f64).collect();
            let neg: Vec<f64> = xs.iter().map(|v| -v).collect();
            prop_assert_eq!(
                find_extrema(&xs, ExtremumKind::LocalMin, prom).frames,
                find_extrema(&neg, ExtremumKind::LocalMax, prom).frames
            );
        }
    }
}
