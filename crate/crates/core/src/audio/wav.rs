use std::path::Path;

use super::{AudioBuffer, AudioError};

/// Read a RIFF PCM WAV file into a mono, normalized [`AudioBuffer`].
///
/// Multichannel input is averaged down to mono. Integer samples are scaled
/// by 2^(bits-1) so a full-scale 16-bit file lands exactly in [-1, 1).
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, AudioError> {
    let mut reader = hound::WavReader::open(path.as_ref()).map_err(map_open_err)?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(AudioError::CorruptHeader("zero channels".into()));
    }

    let interleaved: Vec<f32> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .collect::<Result<_, _>>()
            .map_err(map_data_err)?,
        (hound::SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let denom = (1u64 << (bits - 1)) as f32;
            reader
                .samples::<i32>()
                .map(|s| s.map(|v| v as f32 / denom))
                .collect::<Result<_, _>>()
                .map_err(map_data_err)?
        }
        (fmt, bits) => {
            return Err(AudioError::UnsupportedEncoding(format!(
                "{fmt:?} at {bits} bits"
            )))
        }
    };

    if interleaved.is_empty() {
        return Err(AudioError::EmptyAudio);
    }

    let samples = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks_exact(channels)
            .map(|frame| frame.iter().sum::<f32>() / channels as f32)
            .collect()
    };

    Ok(AudioBuffer {
        samples: samples.iter().map(|s| s.clamp(-1.0, 1.0)).collect(),
        sample_rate: spec.sample_rate,
    })
}

/// Write a mono buffer as 16-bit PCM WAV.
pub fn write_wav(path: impl AsRef<Path>, buffer: &AudioBuffer) -> Result<(), AudioError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buffer.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path.as_ref(), spec)
        .map_err(|e| AudioError::Io(std::io::Error::other(e.to_string())))?;
    for &s in &buffer.samples {
        let v = (s as f64 * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer
            .write_sample(v)
            .map_err(|e| AudioError::Io(std::io::Error::other(e.to_string())))?;
    }
    writer
        .finalize()
        .map_err(|e| AudioError::Io(std::io::Error::other(e.to_string())))?;
    Ok(())
}

fn map_open_err(e: hound::Error) -> AudioError {
    match e {
        hound::Error::IoError(io) => AudioError::Io(io),
        hound::Error::FormatError(msg) => AudioError::CorruptHeader(msg.to_string()),
        hound::Error::Unsupported => {
            AudioError::UnsupportedEncoding("non-PCM or unknown WAV encoding".into())
        }
        other => AudioError::CorruptHeader(other.to_string()),
    }
}

fn map_data_err(e: hound::Error) -> AudioError {
    match e {
        hound::Error::IoError(io) => AudioError::Io(io),
        other => AudioError::CorruptHeader(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_path(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("landmark_core_wav_tests");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn silence_round_trips() {
        let path = temp_path("silence.wav");
        let buf = AudioBuffer::new(vec![0.0; 16_000], 16_000);
        write_wav(&path, &buf).unwrap();
        let back = read_wav(&path).unwrap();
        assert_eq!(back.len(), 16_000);
        assert!(back.samples.iter().all(|&s| s == 0.0));
        assert_eq!(back.sample_rate, 16_000);
    }

    #[test]
    fn stereo_average_matches_mono() {
        let path_st = temp_path("stereo.wav");
        let spec = hound::WavSpec {
            channels: 2,
            sample_rate: 16_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut w = hound::WavWriter::create(&path_st, spec).unwrap();
        let content: Vec<i16> = (0..100).map(|i| (i * 137 % 2048) as i16).collect();
        for &v in &content {
            w.write_sample(v).unwrap();
            w.write_sample(v).unwrap();
        }
        w.finalize().unwrap();

        let path_mono = temp_path("mono.wav");
        let mono = AudioBuffer::new(content.iter().map(|&v| v as f32 / 32768.0).collect(), 16_000);
        write_wav(&path_mono, &mono).unwrap();

        let a = read_wav(&path_st).unwrap();
        let b = read_wav(&path_mono).unwrap();
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn empty_file_is_rejected() {
        let path = temp_path("empty.wav");
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 16_000,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        hound::WavWriter::create(&path, spec).unwrap().finalize().unwrap();
        assert!(matches!(read_wav(&path), Err(AudioError::EmptyAudio)));
    }

    #[test]
    fn garbage_header_is_rejected() {
        let path = temp_path("garbage.wav");
        std::fs::write(&path, b"not a wav file at all............").unwrap();
        match read_wav(&path) {
            Err(AudioError::CorruptHeader(_)) | Err(AudioError::UnsupportedEncoding(_)) => {}
            other => panic!("expected header error, got {other:?}"),
        }
    }
}
