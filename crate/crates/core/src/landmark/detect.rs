//! Rule-based detectors for g, b, s, f, and v landmarks.
//!
//! All five share the same primitive: a band-energy change counts as an
//! event when the coarse and fine derivative tracks both show a peak above
//! their thresholds within the coincidence window. `g` needs one such event
//! in band 1; `b` and `s` need agreeing events in at least three of bands
//! 2-6; `f` and `v` need all of bands 4-6 moving one way while bands 2 and
//! 3 move the other.

use crate::audio::AudioBuffer;
use crate::band::{
    compute_band_energies, differentiate, smooth, BandEnergyTrack, BandError, DerivativeTrack,
    Pass,
};
use crate::peaks::detect_peaks;

use super::{DetectorConfig, Landmark, LandmarkKind, Polarity, VoicingSegments};

/// Band-energy track plus both derivative passes for every band.
#[derive(Debug, Clone)]
pub struct DetectionTracks {
    pub energy: BandEnergyTrack,
    pub coarse: [DerivativeTrack; 6],
    pub fine: [DerivativeTrack; 6],
}

/// Compute band energies and run both smoothing/differentiation passes.
pub fn prepare_tracks(
    audio: &AudioBuffer,
    cfg: &DetectorConfig,
) -> Result<DetectionTracks, BandError> {
    let energy = compute_band_energies(audio, cfg.frame)?;
    let cp_sm = force_odd(cfg.coarse_smooth_frames);
    let fp_sm = force_odd(cfg.fine_smooth_frames);
    let cp_dt = energy.ms_to_frames(cfg.coarse_dt_ms);
    let fp_dt = energy.ms_to_frames(cfg.fine_dt_ms);

    let coarse = std::array::from_fn(|b| {
        differentiate(&smooth(&energy.bands[b], cp_sm, Pass::Coarse), cp_dt)
    });
    let fine = std::array::from_fn(|b| {
        differentiate(&smooth(&energy.bands[b], fp_sm, Pass::Fine), fp_dt)
    });

    Ok(DetectionTracks {
        energy,
        coarse,
        fine,
    })
}

fn force_odd(window: usize) -> usize {
    if window.is_multiple_of(2) {
        window + 1
    } else {
        window.max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Increase,
    Decrease,
}

/// One coincident two-pass energy change in a single band.
#[derive(Debug, Clone, Copy)]
struct BandEvent {
    frame: usize,
    /// Fine-pass peak height in dB.
    strength: f64,
}

/// Find frames where both passes exhibit a peak above threshold within the
/// coincidence window. Events are anchored on the fine-pass peak, which has
/// the tighter localization.
fn two_pass_events(
    tracks: &DetectionTracks,
    band: usize,
    direction: Direction,
    coarse_min_db: f64,
    fine_min_db: f64,
    cfg: &DetectorConfig,
) -> Vec<BandEvent> {
    let win = tracks.energy.ms_to_frames(cfg.coincidence_window_ms);
    let dist = tracks.energy.ms_to_frames(cfg.peak_min_distance_ms);

    let orient = |values: &[f64]| -> Vec<f64> {
        match direction {
            Direction::Increase => values.to_vec(),
            Direction::Decrease => values.iter().map(|v| -v).collect(),
        }
    };
    let coarse_signal = orient(&tracks.coarse[band].values);
    let fine_signal = orient(&tracks.fine[band].values);

    let coarse_peaks = detect_peaks(
        &coarse_signal,
        coarse_min_db,
        cfg.peak_min_prominence_db,
        dist,
    );
    let fine_peaks = detect_peaks(&fine_signal, fine_min_db, cfg.peak_min_prominence_db, dist);

    fine_peaks
        .iter()
        .filter(|fp| {
            coarse_peaks
                .iter()
                .any(|cp| cp.index.abs_diff(fp.index) <= win)
        })
        .map(|fp| BandEvent {
            frame: fp.index,
            strength: fp.height,
        })
        .collect()
}

/// Detect unpaired g candidates: coincident two-pass peaks in band 1.
/// Rises become `g+`, falls `g-`; strength is the fine-pass peak height.
pub fn detect_g(tracks: &DetectionTracks, cfg: &DetectorConfig) -> Vec<Landmark> {
    let mut out = Vec::new();
    for (direction, polarity) in [
        (Direction::Increase, Polarity::Plus),
        (Direction::Decrease, Polarity::Minus),
    ] {
        for ev in two_pass_events(
            tracks,
            0,
            direction,
            cfg.coarse_threshold_db,
            cfg.fine_threshold_db,
            cfg,
        ) {
            out.push(Landmark::new(
                LandmarkKind::G,
                polarity,
                tracks.energy.frame_time_s(ev.frame),
                ev.strength,
            ));
        }
    }
    out.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    out
}

/// Two-level objective for the pairing DP: number of completed pairs,
/// then total strength. `None` marks unreachable states.
type PairScore = Option<(usize, f64)>;

fn better(a: PairScore, b: PairScore) -> bool {
    match (a, b) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some((pa, sa)), Some((pb, sb))) => pa > pb || (pa == pb && sa > sb),
    }
}

/// Select the best strictly alternating `g+ g- g+ g- ...` subsequence.
///
/// The glottis opens and closes in pairs, so retained landmarks must
/// alternate starting with `g+` and ending with `g-`. Among all such
/// subsequences the DP maximizes the pair count first and the summed
/// strength second; remaining ties resolve toward the earliest candidates.
/// Unmatched candidates are dropped. Returns the retained landmarks and
/// the voiced segments they delimit.
pub fn pair_g(candidates: &[Landmark]) -> (Vec<Landmark>, VoicingSegments) {
    let n = candidates.len();
    // best[i][s]: best (pairs, strength) from candidates[i..] given that we
    // currently expect polarity s (0 = expecting +, 1 = expecting -), under
    // the constraint that the sequence finishes complete (state 0).
    let mut best = vec![[None as PairScore; 2]; n + 1];
    best[n][0] = Some((0, 0.0));
    best[n][1] = None;

    for i in (0..n).rev() {
        for s in 0..2 {
            let skip = best[i + 1][s];
            let expected = if s == 0 { Polarity::Plus } else { Polarity::Minus };
            let take = if candidates[i].polarity == expected {
                best[i + 1][1 - s].map(|(pairs, strength)| {
                    let completed = if s == 1 { pairs + 1 } else { pairs };
                    (completed, strength + candidates[i].strength)
                })
            } else {
                None
            };
            // Strict improvement required to skip, so ties take the earlier
            // candidate and the selection is deterministic.
            best[i][s] = if better(skip, take) { skip } else { take.or(skip) };
        }
    }

    let mut retained = Vec::new();
    let mut s = 0usize;
    for i in 0..n {
        let expected = if s == 0 { Polarity::Plus } else { Polarity::Minus };
        if candidates[i].polarity != expected {
            continue;
        }
        let take = best[i + 1][1 - s].map(|(pairs, strength)| {
            let completed = if s == 1 { pairs + 1 } else { pairs };
            (completed, strength + candidates[i].strength)
        });
        if take == best[i][s] && take.is_some() {
            retained.push(candidates[i]);
            s = 1 - s;
        }
    }
    debug_assert_eq!(s, 0, "pairing must end on a g-");

    let segments: Vec<(f64, f64)> = retained
        .chunks_exact(2)
        .map(|pair| (pair[0].time_s, pair[1].time_s))
        .collect();
    (retained, VoicingSegments::from_intervals(segments))
}

/// One multi-band candidate before suppression.
struct MultibandHit {
    frame: usize,
    support: usize,
    strength: f64,
}

/// Pool per-band events and keep anchors where at least `need` distinct
/// bands agree within the coincidence window. Returns (frame, strength).
fn multiband_anchors(
    tracks: &DetectionTracks,
    bands: &[usize],
    direction: Direction,
    threshold_db: f64,
    need: usize,
    cfg: &DetectorConfig,
) -> Vec<(usize, f64)> {
    let win = tracks.energy.ms_to_frames(cfg.coincidence_window_ms);
    let per_band: Vec<Vec<BandEvent>> = bands
        .iter()
        .map(|&b| two_pass_events(tracks, b, direction, threshold_db, threshold_db, cfg))
        .collect();

    let mut hits: Vec<MultibandHit> = Vec::new();
    for events in &per_band {
        for anchor in events {
            let mut support = 0usize;
            let mut strength_sum = 0.0f64;
            for other in &per_band {
                let nearest = other
                    .iter()
                    .filter(|e| e.frame.abs_diff(anchor.frame) <= win)
                    .min_by_key(|e| e.frame.abs_diff(anchor.frame));
                if let Some(e) = nearest {
                    support += 1;
                    strength_sum += e.strength;
                }
            }
            if support >= need {
                hits.push(MultibandHit {
                    frame: anchor.frame,
                    support,
                    strength: strength_sum / support as f64,
                });
            }
        }
    }

    // Strongest-supported anchor claims its window; ties prefer strength,
    // then the earlier frame.
    hits.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then(b.strength.total_cmp(&a.strength))
            .then(a.frame.cmp(&b.frame))
    });
    let mut kept: Vec<(usize, f64)> = Vec::new();
    for hit in &hits {
        if kept.iter().all(|&(f, _)| f.abs_diff(hit.frame) > win) {
            kept.push((hit.frame, hit.strength));
        }
    }
    kept.sort_by_key(|&(f, _)| f);
    kept
}

const BS_BANDS: [usize; 5] = [1, 2, 3, 4, 5]; // bands 2-6; band 1 is g's
const HIGH_BANDS: [usize; 3] = [3, 4, 5]; // bands 4-6
const LOW_BANDS: [usize; 2] = [1, 2]; // bands 2-3

/// Burst landmarks: >= 3 of bands 2-6 jumping together by the multiband
/// threshold in both passes, outside voiced segments.
pub fn detect_b(
    tracks: &DetectionTracks,
    segments: &VoicingSegments,
    cfg: &DetectorConfig,
) -> Vec<Landmark> {
    multiband_landmarks(tracks, segments, cfg, LandmarkKind::B, false)
}

/// Syllabic landmarks: the same 3-of-5 test as `b`, inside voiced segments.
pub fn detect_s(
    tracks: &DetectionTracks,
    segments: &VoicingSegments,
    cfg: &DetectorConfig,
) -> Vec<Landmark> {
    multiband_landmarks(tracks, segments, cfg, LandmarkKind::S, true)
}

fn multiband_landmarks(
    tracks: &DetectionTracks,
    segments: &VoicingSegments,
    cfg: &DetectorConfig,
    kind: LandmarkKind,
    voiced: bool,
) -> Vec<Landmark> {
    let mut out = Vec::new();
    for (direction, polarity) in [
        (Direction::Increase, Polarity::Plus),
        (Direction::Decrease, Polarity::Minus),
    ] {
        for (frame, strength) in multiband_anchors(
            tracks,
            &BS_BANDS,
            direction,
            cfg.multiband_threshold_db,
            3,
            cfg,
        ) {
            let t = tracks.energy.frame_time_s(frame);
            if segments.is_voiced(t) == voiced {
                out.push(Landmark::new(kind, polarity, t, strength));
            }
        }
    }
    out.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    out
}

/// Frication landmarks.
///
/// `+`: all of bands 4-6 rise by the multiband threshold while bands 2 and
/// 3 both fall; `-` is the exact mirror. Anchors in unvoiced time are `f`,
/// anchors in voiced time are `v`. Strength is the mean high-band rise.
pub fn detect_f_v(
    tracks: &DetectionTracks,
    segments: &VoicingSegments,
    cfg: &DetectorConfig,
) -> Vec<Landmark> {
    let win = tracks.energy.ms_to_frames(cfg.coincidence_window_ms);
    let mut out = Vec::new();

    for (high_dir, low_dir, polarity) in [
        (Direction::Increase, Direction::Decrease, Polarity::Plus),
        (Direction::Decrease, Direction::Increase, Polarity::Minus),
    ] {
        let high_anchors = multiband_anchors(
            tracks,
            &HIGH_BANDS,
            high_dir,
            cfg.multiband_threshold_db,
            3,
            cfg,
        );
        let low_events: Vec<Vec<BandEvent>> = LOW_BANDS
            .iter()
            .map(|&b| {
                two_pass_events(
                    tracks,
                    b,
                    low_dir,
                    cfg.low_band_decrease_db,
                    cfg.low_band_decrease_db,
                    cfg,
                )
            })
            .collect();

        for (frame, strength) in high_anchors {
            let lows_agree = low_events.iter().all(|events| {
                events.iter().any(|e| e.frame.abs_diff(frame) <= win)
            });
            if !lows_agree {
                continue;
            }
            let t = tracks.energy.frame_time_s(frame);
            let kind = if segments.is_voiced(t) {
                LandmarkKind::V
            } else {
                LandmarkKind::F
            };
            out.push(Landmark::new(kind, polarity, t, strength));
        }
    }
    out.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    out
}
