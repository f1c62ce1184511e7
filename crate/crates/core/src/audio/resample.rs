use super::AudioBuffer;

/// Sample-rate conversion by windowed-sinc interpolation.
///
/// The kernel is a Hann-windowed sinc with 16 zero crossings per side,
/// low-passed at 95% of the narrower Nyquist so decimation does not alias
/// band 6 content. Output length is `round(len * target / source)`, which
/// keeps total duration within one sample period.
pub fn resample(buffer: &AudioBuffer, target_rate: u32) -> AudioBuffer {
    assert!(target_rate > 0, "target rate must be positive");
    if buffer.sample_rate == target_rate || buffer.samples.is_empty() {
        return AudioBuffer {
            samples: buffer.samples.clone(),
            sample_rate: target_rate,
        };
    }

    let ratio = target_rate as f64 / buffer.sample_rate as f64;
    let cutoff = ratio.min(1.0) * 0.95;
    const ZERO_CROSSINGS: f64 = 16.0;
    let half_width = ZERO_CROSSINGS / cutoff;

    let src = &buffer.samples;
    let out_len = (src.len() as f64 * ratio).round() as usize;
    let mut out = Vec::with_capacity(out_len);

    for j in 0..out_len {
        let t = j as f64 / ratio;
        let lo = ((t - half_width).ceil() as isize).max(0) as usize;
        let hi = ((t + half_width).floor() as isize).min(src.len() as isize - 1) as usize;
        let mut acc = 0.0f64;
        for (i, &x) in src.iter().enumerate().take(hi + 1).skip(lo) {
            let u = i as f64 - t;
            acc += x as f64 * cutoff * sinc(cutoff * u) * hann(u / half_width);
        }
        out.push(acc as f32);
    }

    AudioBuffer {
        samples: out,
        sample_rate: target_rate,
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Hann taper over [-1, 1]; zero outside.
fn hann(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * u).cos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_rate_returns_same_buffer() {
        let buf = AudioBuffer::new(vec![0.1, -0.2, 0.3], 16_000);
        let out = resample(&buf, 16_000);
        assert_eq!(out, buf);
    }

    #[test]
    fn length_arithmetic_48k_to_16k() {
        let buf = AudioBuffer::new(vec![0.0; 48_000], 48_000);
        let out = resample(&buf, 16_000);
        assert!(
            (out.len() as i64 - 16_000).unsigned_abs() <= 1,
            "got {} samples",
            out.len()
        );
        assert_eq!(out.sample_rate, 16_000);
    }

    #[test]
    fn duration_preserved_within_one_period() {
        let buf = AudioBuffer::new(vec![0.0; 12_345], 44_100);
        let out = resample(&buf, 16_000);
        let diff = (out.duration_s() - buf.duration_s()).abs();
        assert!(diff <= 1.0 / 16_000.0, "duration drift {diff}");
    }
}
