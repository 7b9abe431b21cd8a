use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::QMatrix;

/// Dynamic range of 8-bit channels.
pub const DYNAMIC_RANGE: f64 = 255.0;

/// A colour image as a pure quaternion matrix: red, green and blue in the
/// `i`, `j` and `k` components.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatImage {
    data: QMatrix,
}

impl QuatImage {
    /// From interleaved row-major RGB bytes.
    pub fn from_rgb8(height: usize, width: usize, rgb: &[u8]) -> Result<Self> {
        if rgb.len() != 3 * height * width {
            return Err(Error::InvalidArgument(format!(
                "{height}x{width} RGB image needs {} bytes, got {}",
                3 * height * width,
                rgb.len()
            )));
        }
        let channel =
            |c: usize| DMatrix::from_fn(height, width, |r, col| rgb[3 * (r * width + col) + c] as f64);
        let data = QMatrix::from_parts([DMatrix::zeros(height, width), channel(0), channel(1), channel(2)])?;
        Ok(QuatImage { data })
    }

    /// Keeps the imaginary part of `q` as the image; the real part is dropped.
    pub fn from_qmatrix(q: &QMatrix) -> Self {
        let mut data = q.clone();
        data.part_mut(0).fill(0.0);
        QuatImage { data }
    }

    pub fn height(&self) -> usize {
        self.data.nrows()
    }

    pub fn width(&self) -> usize {
        self.data.ncols()
    }

    pub fn as_qmatrix(&self) -> &QMatrix {
        &self.data
    }

    pub fn into_qmatrix(self) -> QMatrix {
        self.data
    }

    /// Channel `c ∈ {0, 1, 2}` (red, green, blue).
    pub fn channel(&self, c: usize) -> &DMatrix<f64> {
        self.data.part(c + 1)
    }

    /// Interleaved row-major RGB bytes, clamped to `[0, 255]` and rounded.
    pub fn to_rgb8(&self) -> Vec<u8> {
        let (h, w) = (self.height(), self.width());
        let mut out = Vec::with_capacity(3 * h * w);
        for r in 0..h {
            for col in 0..w {
                for c in 0..3 {
                    out.push(self.channel(c)[(r, col)].clamp(0.0, DYNAMIC_RANGE).round() as u8);
                }
            }
        }
        out
    }

    /// All `3hw` channel values, channel by channel.
    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (1..4).flat_map(move |s| self.data.part(s).iter().copied())
    }

    fn check_same_shape(&self, other: &QuatImage, op: &'static str) -> Result<()> {
        if self.data.shape() != other.data.shape() {
            return Err(Error::mismatch(op, self.data.shape(), other.data.shape()));
        }
        Ok(())
    }
}

/// Reads an 8-bit RGB PNG.
pub fn image_read(path: impl AsRef<Path>) -> Result<QuatImage> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let unsupported = |reason: String| Error::UnsupportedFormat {
        path: path.to_path_buf(),
        reason,
    };
    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(|e| unsupported(e.to_string()))?;
    let info = reader.info();
    if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
        return Err(unsupported(format!(
            "need 8-bit RGB, found {:?} at {:?} bits",
            info.color_type, info.bit_depth
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| unsupported("image too large".into()))?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(|e| unsupported(e.to_string()))?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let line = frame.line_size;
    let mut rgb = Vec::with_capacity(3 * w * h);
    for r in 0..h {
        rgb.extend_from_slice(&buf[r * line..r * line + 3 * w]);
    }
    QuatImage::from_rgb8(h, w, &rgb)
}

/// Writes an 8-bit RGB PNG, clamping and rounding channel values.
pub fn image_write(path: impl AsRef<Path>, img: &QuatImage) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), img.width() as u32, img.height() as u32);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let to_io = |e: png::EncodingError| Error::io(path, std::io::Error::other(e));
    let mut writer = encoder.write_header().map_err(to_io)?;
    writer.write_image_data(&img.to_rgb8()).map_err(to_io)?;
    writer.finish().map_err(to_io)
}

/// A deterministic smooth test image with a few sharp edges.
pub fn synthetic_image(height: usize, width: usize) -> QuatImage {
    use std::f64::consts::PI;
    let mut rgb = Vec::with_capacity(3 * height * width);
    for r in 0..height {
        for c in 0..width {
            let y = r as f64 / height as f64;
            let x = c as f64 / width as f64;
            let disk = ((x - 0.35).powi(2) + (y - 0.4).powi(2)) < 0.04;
            let bar = (0.6..0.8).contains(&x) && (0.2..0.9).contains(&y);
            let red = 120.0 + 80.0 * (2.0 * PI * x).sin() + if disk { 50.0 } else { 0.0 };
            let green = 60.0 + 150.0 * y + if bar { -40.0 } else { 0.0 };
            let blue = 128.0 + 90.0 * (PI * (x + y)).cos() * if disk { -1.0 } else { 1.0 };
            for v in [red, green, blue] {
                rgb.push(v.clamp(0.0, DYNAMIC_RANGE).round() as u8);
            }
        }
    }
    QuatImage::from_rgb8(height, width, &rgb).expect("buffer sized to the image")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub psnr: f64,
    pub ssim: f64,
    pub rr: f64,
}

fn diff_norm_sqr(x: &QuatImage, xk: &QuatImage) -> f64 {
    x.values().zip(xk.values()).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `10 log10(3hw d² / ‖X − X_k‖²)`; `+∞` for identical images.
pub fn psnr(x: &QuatImage, xk: &QuatImage) -> Result<f64> {
    x.check_same_shape(xk, "psnr")?;
    let count = 3.0 * (x.height() * x.width()) as f64;
    let err = diff_norm_sqr(x, xk);
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (count * DYNAMIC_RANGE * DYNAMIC_RANGE / err).log10())
}

/// Global SSIM over all channel values, population statistics, `L = 255`.
pub fn ssim(x: &QuatImage, xk: &QuatImage) -> Result<f64> {
    x.check_same_shape(xk, "ssim")?;
    let count = 3.0 * (x.height() * x.width()) as f64;
    let mu_x = x.values().sum::<f64>() / count;
    let mu_y = xk.values().sum::<f64>() / count;
    let (mut var_x, mut var_y, mut cov) = (0.0, 0.0, 0.0);
    for (a, b) in x.values().zip(xk.values()) {
        let (da, db) = (a - mu_x, b - mu_y);
        var_x += da * da;
        var_y += db * db;
        cov += da * db;
    }
    var_x /= count;
    var_y /= count;
    cov /= count;
    let c1 = (0.01 * DYNAMIC_RANGE).powi(2);
    let c2 = (0.03 * DYNAMIC_RANGE).powi(2);
    Ok((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2) / ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)))
}

/// `‖X − X_k‖ / ‖X‖`.
pub fn rr(x: &QuatImage, xk: &QuatImage) -> Result<f64> {
    x.check_same_shape(xk, "rr")?;
    let norm: f64 = x.values().map(|v| v * v).sum::<f64>().sqrt();
    Ok(diff_norm_sqr(x, xk).sqrt() / norm)
}

pub fn metrics(x: &QuatImage, xk: &QuatImage) -> Result<Metrics> {
    Ok(Metrics {
        psnr: psnr(x, xk)?,
        ssim: ssim(x, xk)?,
        rr: rr(x, xk)?,
    })
}
