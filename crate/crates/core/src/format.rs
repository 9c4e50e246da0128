//! `.taxfrm` binary frame files and their `.labels` sidecar.
//!
//! Layout, all little-endian:
//!
//! ```text
//! header  magic "TAXFRM01" (8) | n u16 | pitch_mm f32 | frame_count u32 | frame_rate_hz f32
//! frame   timestamp f64 | fx[n*n] f32 | fy[n*n] f32 | fz[n*n] f32   (row-major fields)
//! ```
//!
//! The sidecar holds one `start_s,end_s,STATE` line per truth interval.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use byteorder::{ByteOrder, LittleEndian, WriteBytesExt};

use crate::detect::SlipState;
use crate::error::{Error, Result};
use crate::grid::{ForceFrame, TaxelGridSpec};
use crate::sequence::{LabeledSequence, TruthInterval};

pub const MAGIC: &[u8; 8] = b"TAXFRM01";
pub const HEADER_LEN: usize = 8 + 2 + 4 + 4 + 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameFileHeader {
    pub n: u16,
    pub pitch_mm: f32,
    pub frame_count: u32,
    pub frame_rate_hz: f32,
}

impl FrameFileHeader {
    pub fn frame_len(&self) -> usize {
        frame_len(self.n as usize)
    }

    pub fn file_len(&self) -> u64 {
        HEADER_LEN as u64 + self.frame_count as u64 * self.frame_len() as u64
    }
}

/// Encoded size of one frame on an `n x n` grid.
pub fn frame_len(n: usize) -> usize {
    8 + 3 * n * n * 4
}

/// Path of the label sidecar: the frame file's path with a `.labels` extension.
pub fn labels_path(path: &Path) -> PathBuf {
    path.with_extension("labels")
}

pub fn encode_sequence(sequence: &LabeledSequence) -> Result<Vec<u8>> {
    sequence.validate()?;
    let n = sequence.grid.n();
    let frame_count = u32::try_from(sequence.frames.len())
        .map_err(|_| Error::InvalidParameter("too many frames for a frame file".into()))?;
    let header = FrameFileHeader {
        n: n as u16,
        pitch_mm: sequence.grid.pitch_mm() as f32,
        frame_count,
        frame_rate_hz: sequence.frame_rate_hz as f32,
    };
    let mut buf = Vec::with_capacity(header.file_len() as usize);
    buf.extend_from_slice(MAGIC);
    buf.write_u16::<LittleEndian>(header.n)?;
    buf.write_f32::<LittleEndian>(header.pitch_mm)?;
    buf.write_u32::<LittleEndian>(header.frame_count)?;
    buf.write_f32::<LittleEndian>(header.frame_rate_hz)?;
    for frame in &sequence.frames {
        buf.write_f64::<LittleEndian>(frame.timestamp())?;
        for field in [frame.fx(), frame.fy(), frame.fz()] {
            for &v in field {
                buf.write_f32::<LittleEndian>(v as f32)?;
            }
        }
    }
    Ok(buf)
}

pub fn decode_header(bytes: &[u8]) -> Result<FrameFileHeader> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN as u64,
            actual: bytes.len() as u64,
        });
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::BadMagic {
            expected: String::from_utf8_lossy(MAGIC).into_owned(),
            found: String::from_utf8_lossy(&bytes[..8]).into_owned(),
        });
    }
    let header = FrameFileHeader {
        n: LittleEndian::read_u16(&bytes[8..10]),
        pitch_mm: LittleEndian::read_f32(&bytes[10..14]),
        frame_count: LittleEndian::read_u32(&bytes[14..18]),
        frame_rate_hz: LittleEndian::read_f32(&bytes[18..22]),
    };
    if header.n == 0 {
        return Err(Error::InvalidHeader("n must be at least 1".into()));
    }
    if !(header.pitch_mm.is_finite() && header.pitch_mm > 0.0) {
        return Err(Error::InvalidHeader(format!(
            "bad pitch {}",
            header.pitch_mm
        )));
    }
    if !(header.frame_rate_hz.is_finite() && header.frame_rate_hz > 0.0) {
        return Err(Error::InvalidHeader(format!(
            "bad frame rate {}",
            header.frame_rate_hz
        )));
    }
    Ok(header)
}

/// Decodes frames; the returned sequence has no truth.
pub fn decode_sequence(bytes: &[u8]) -> Result<LabeledSequence> {
    let header = decode_header(bytes)?;
    let expected = header.file_len();
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(Error::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(Error::TrailingData { expected, actual });
    }
    let n = header.n as usize;
    let len = n * n;
    let grid = TaxelGridSpec::new(n, header.pitch_mm as f64)?;
    let mut frames = Vec::with_capacity(header.frame_count as usize);
    for (index, chunk) in bytes[HEADER_LEN..]
        .chunks_exact(header.frame_len())
        .enumerate()
    {
        let timestamp = LittleEndian::read_f64(&chunk[..8]);
        let field = |k: usize| -> Vec<f64> {
            let start = 8 + k * len * 4;
            chunk[start..start + len * 4]
                .chunks_exact(4)
                .map(|b| LittleEndian::read_f32(b) as f64)
                .collect()
        };
        let frame = ForceFrame::new(timestamp, n, field(0), field(1), field(2)).map_err(|e| {
            Error::CorruptFrame {
                frame: index,
                source: Box::new(e),
            }
        })?;
        frames.push(frame);
    }
    let sequence = LabeledSequence {
        grid,
        frame_rate_hz: header.frame_rate_hz as f64,
        frames,
        truth: Vec::new(),
        phases: Vec::new(),
    };
    sequence.validate()?;
    Ok(sequence)
}

pub fn write_labels<W: Write>(truth: &[TruthInterval], mut out: W) -> Result<()> {
    for iv in truth {
        writeln!(out, "{},{},{}", iv.start_s, iv.end_s, iv.state)?;
    }
    out.flush()?;
    Ok(())
}

pub fn parse_labels(text: &str, path: &Path) -> Result<Vec<TruthInterval>> {
    let err = |line: usize, message: String| Error::Label {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut truth = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        let [start, end, state] = parts[..] else {
            return Err(err(
                i + 1,
                format!("expected 3 fields, found {}", parts.len()),
            ));
        };
        let number = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(i + 1, format!("bad time {s:?}")))
        };
        let state: SlipState = state
            .parse()
            .map_err(|_| err(i + 1, format!("bad state {state:?}")))?;
        truth.push(TruthInterval {
            start_s: number(start)?,
            end_s: number(end)?,
            state,
        });
    }
    Ok(truth)
}

/// Writes the frame file and its label sidecar.
pub fn write_sequence(sequence: &LabeledSequence, path: &Path) -> Result<()> {
    let bytes = encode_sequence(sequence)?;
    fs::write(path, bytes)?;
    let labels = fs::File::create(labels_path(path))?;
    write_labels(&sequence.truth, BufWriter::new(labels))
}

/// Reads a frame file; a missing label sidecar yields empty truth.
pub fn read_sequence(path: &Path) -> Result<LabeledSequence> {
    let bytes = fs::read(path)?;
    let mut sequence = decode_sequence(&bytes)?;
    let labels = labels_path(path);
    if labels.exists() {
        sequence.truth = parse_labels(&fs::read_to_string(&labels)?, &labels)?;
        sequence.validate()?;
    }
    Ok(sequence)
}
