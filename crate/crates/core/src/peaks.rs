//! Significant-peak detection on 1D tracks.
//!
//! A sample qualifies as a peak when it satisfies every enabled clause:
//!
//! 1. local maximum: `x[n] > x[n-1]` and `x[n] > x[n+1]`
//! 2. height: `x[n] > min_height`
//! 3. prominence: vertical distance from the peak down to its lowest
//!    contour line (the higher of the two valley minima found before a
//!    taller sample is reached on each side) must exceed `min_prominence`
//! 4. separation: any two reported peaks are more than `min_distance`
//!    apart; when two candidates are too close the taller survives, and
//!    equal heights keep the earlier index.

/// One detected peak.
#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    /// Position in the input track.
    pub index: usize,
    /// Signal value at `index`.
    pub height: f64,
    /// Height above the lowest enclosing contour line.
    pub prominence: f64,
    /// Distance between the first samples on each side that drop below
    /// `height - prominence`; boundary-clamped when no such sample exists.
    pub width: usize,
}

/// Find all peaks satisfying the height, prominence, and separation clauses.
///
/// Output is sorted by index. Signals shorter than 3 samples have no
/// interior, hence no peaks.
pub fn detect_peaks(
    signal: &[f64],
    min_height: f64,
    min_prominence: f64,
    min_distance: usize,
) -> Vec<Peak> {
    if signal.len() < 3 {
        return Vec::new();
    }

    let mut candidates: Vec<Peak> = (1..signal.len() - 1)
        .filter(|&n| signal[n] > signal[n - 1] && signal[n] > signal[n + 1])
        .filter(|&n| signal[n] > min_height)
        .map(|n| peak_properties(signal, n))
        .filter(|p| p.prominence > min_prominence)
        .collect();

    if min_distance > 0 {
        candidates = suppress_close_peaks(candidates, min_distance);
    }
    candidates
}

fn peak_properties(signal: &[f64], index: usize) -> Peak {
    let height = signal[index];

    // Valley minimum on each side, scanning until a strictly taller sample.
    let mut left_valley = height;
    for i in (0..index).rev() {
        if signal[i] > height {
            break;
        }
        left_valley = left_valley.min(signal[i]);
    }
    let mut right_valley = height;
    for &v in &signal[index + 1..] {
        if v > height {
            break;
        }
        right_valley = right_valley.min(v);
    }
    let prominence = height - left_valley.max(right_valley);

    // Width at the contour line: first sample on each side below
    // height - prominence.
    let floor = height - prominence;
    let left_edge = (0..index)
        .rev()
        .find(|&i| signal[i] < floor)
        .unwrap_or(0);
    let right_edge = (index + 1..signal.len())
        .find(|&i| signal[i] < floor)
        .unwrap_or(signal.len() - 1);

    Peak {
        index,
        height,
        prominence,
        width: right_edge - left_edge,
    }
}

/// Greedy suppression: taller peaks claim their window first; ties keep the
/// earlier index. Survivors end up pairwise more than `min_distance` apart.
fn suppress_close_peaks(mut candidates: Vec<Peak>, min_distance: usize) -> Vec<Peak> {
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[b]
            .height
            .total_cmp(&candidates[a].height)
            .then(candidates[a].index.cmp(&candidates[b].index))
    });

    let mut kept = vec![false; candidates.len()];
    let mut kept_indices: Vec<usize> = Vec::new();
    for &c in &order {
        let idx = candidates[c].index;
        if kept_indices.iter().all(|&k| idx.abs_diff(k) > min_distance) {
            kept[c] = true;
            kept_indices.push(idx);
        }
    }

    let mut i = 0;
    candidates.retain(|_| {
        let keep = kept[i];
        i += 1;
        keep
    });
    candidates
}
