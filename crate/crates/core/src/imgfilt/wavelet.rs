use std::f64::consts::FRAC_1_SQRT_2;

use crate::imgvol::Volume3D;

use super::{FilterError, Result};

/// Band labels, letters ordered x, y, z. `L` is the Haar low-pass, `H` the high-pass.
pub const BAND_LABELS: [&str; 8] = ["LLL", "LLH", "LHL", "LHH", "HLL", "HLH", "HHL", "HHH"];

/// The eight sub-bands of a single-level 3D Haar decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletBands {
    bands: Vec<Volume3D>,
    original_dims: [usize; 3],
}

impl WaveletBands {
    pub fn new(bands: Vec<Volume3D>, original_dims: [usize; 3]) -> Result<Self> {
        if bands.len() != 8 {
            return Err(FilterError::BandMismatch(format!("expected 8 bands, got {}", bands.len())));
        }
        let dims = bands[0].dims();
        if bands.iter().any(|b| b.dims() != dims) {
            return Err(FilterError::BandMismatch("bands differ in dims".into()));
        }
        for a in 0..3 {
            if original_dims[a].div_ceil(2) != dims[a] {
                return Err(FilterError::BandMismatch(format!(
                    "band dims {dims:?} incompatible with original dims {original_dims:?}"
                )));
            }
        }
        Ok(Self { bands, original_dims })
    }

    pub fn band(&self, label: &str) -> Option<&Volume3D> {
        BAND_LABELS.iter().position(|l| *l == label).map(|i| &self.bands[i])
    }

    /// `(label, band)` pairs in [`BAND_LABELS`] order.
    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &Volume3D)> {
        BAND_LABELS.iter().copied().zip(self.bands.iter())
    }

    pub fn original_dims(&self) -> [usize; 3] {
        self.original_dims
    }

    pub fn band_dims(&self) -> [usize; 3] {
        self.bands[0].dims()
    }
}

fn stride(dims: [usize; 3], axis: usize) -> usize {
    match axis {
        0 => 1,
        1 => dims[0],
        _ => dims[0] * dims[1],
    }
}

/// In-place analysis along `axis`; output line holds lows in the first half, highs in the second.
fn analyze_axis(data: &mut [f64], dims: [usize; 3], axis: usize) {
    let st = stride(dims, axis);
    let n = dims[axis];
    let half = n / 2;
    let mut line = vec![0.0; n];
    for start in 0..data.len() {
        if (start / st) % n != 0 {
            continue;
        }
        for (i, v) in line.iter_mut().enumerate() {
            *v = data[start + i * st];
        }
        for i in 0..half {
            let (a, b) = (line[2 * i], line[2 * i + 1]);
            data[start + i * st] = (a + b) * FRAC_1_SQRT_2;
            data[start + (half + i) * st] = (a - b) * FRAC_1_SQRT_2;
        }
    }
}

fn synthesize_axis(data: &mut [f64], dims: [usize; 3], axis: usize) {
    let st = stride(dims, axis);
    let n = dims[axis];
    let half = n / 2;
    let mut line = vec![0.0; n];
    for start in 0..data.len() {
        if (start / st) % n != 0 {
            continue;
        }
        for (i, v) in line.iter_mut().enumerate() {
            *v = data[start + i * st];
        }
        for i in 0..half {
            let (lo, hi) = (line[i], line[half + i]);
            data[start + 2 * i * st] = (lo + hi) * FRAC_1_SQRT_2;
            data[start + (2 * i + 1) * st] = (lo - hi) * FRAC_1_SQRT_2;
        }
    }
}

/// Replicate-edge padding of each odd axis to the next even length.
pub(crate) fn pad_even(vol: &Volume3D) -> (Vec<f64>, [usize; 3]) {
    let dims = vol.dims();
    let padded = [dims[0] + dims[0] % 2, dims[1] + dims[1] % 2, dims[2] + dims[2] % 2];
    let mut out = Vec::with_capacity(padded.iter().product());
    for z in 0..padded[2] {
        for y in 0..padded[1] {
            for x in 0..padded[0] {
                out.push(vol.get(x.min(dims[0] - 1), y.min(dims[1] - 1), z.min(dims[2] - 1)));
            }
        }
    }
    (out, padded)
}

/// Single-level orthonormal Haar analysis along x, then y, then z.
pub fn wavelet_decompose(vol: &Volume3D) -> Result<WaveletBands> {
    let (mut data, padded) = pad_even(vol);
    for axis in 0..3 {
        analyze_axis(&mut data, padded, axis);
    }
    let bd = [padded[0] / 2, padded[1] / 2, padded[2] / 2];
    let spacing = vol.spacing();
    let band_spacing = [spacing[0] * 2.0, spacing[1] * 2.0, spacing[2] * 2.0];
    let mut bands = Vec::with_capacity(8);
    for b in 0..8 {
        // label letter for x is the most significant bit
        let off = [
            if b & 4 != 0 { bd[0] } else { 0 },
            if b & 2 != 0 { bd[1] } else { 0 },
            if b & 1 != 0 { bd[2] } else { 0 },
        ];
        let mut band = Vec::with_capacity(bd.iter().product());
        for z in 0..bd[2] {
            for y in 0..bd[1] {
                for x in 0..bd[0] {
                    band.push(data[(x + off[0]) + padded[0] * ((y + off[1]) + padded[1] * (z + off[2]))]);
                }
            }
        }
        bands.push(Volume3D::new(bd, band_spacing, vol.origin(), band)?);
    }
    WaveletBands::new(bands, vol.dims())
}

/// Inverse of [`wavelet_decompose`], cropping any padding added for odd dims.
pub fn wavelet_reconstruct(bands: &WaveletBands) -> Result<Volume3D> {
    let bd = bands.band_dims();
    let padded = [bd[0] * 2, bd[1] * 2, bd[2] * 2];
    let mut data = vec![0.0; padded.iter().product()];
    for (b, (_, band)) in bands.iter().enumerate() {
        let off = [
            if b & 4 != 0 { bd[0] } else { 0 },
            if b & 2 != 0 { bd[1] } else { 0 },
            if b & 1 != 0 { bd[2] } else { 0 },
        ];
        for z in 0..bd[2] {
            for y in 0..bd[1] {
                for x in 0..bd[0] {
                    data[(x + off[0]) + padded[0] * ((y + off[1]) + padded[1] * (z + off[2]))] = band.get(x, y, z);
                }
            }
        }
    }
    for axis in (0..3).rev() {
        synthesize_axis(&mut data, padded, axis);
    }
    let od = bands.original_dims();
    let mut out = Vec::with_capacity(od.iter().product());
    for z in 0..od[2] {
        for y in 0..od[1] {
            for x in 0..od[0] {
                out.push(data[x + padded[0] * (y + padded[1] * z)]);
            }
        }
    }
    let s = bands.bands[0].spacing();
    Ok(Volume3D::new(od, [s[0] / 2.0, s[1] / 2.0, s[2] / 2.0], bands.bands[0].origin(), out)?)
}
