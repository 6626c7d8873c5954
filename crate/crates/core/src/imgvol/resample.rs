use super::{check_spacing, Mask3D, Result, Volume3D, VolumeError};

/// Output grid size that keeps the span between the first and last voxel
/// centers: `floor((n - 1) * s_old / s_new) + 1` per axis.
pub fn resample_output_dims(dims: [usize; 3], spacing_old: [f64; 3], spacing_new: [f64; 3]) -> Result<[usize; 3]> {
    check_spacing(spacing_old)?;
    check_spacing(spacing_new)?;
    let mut out = [0usize; 3];
    for a in 0..3 {
        let extent = (dims[a].saturating_sub(1)) as f64 * spacing_old[a] / spacing_new[a];
        // absorb rounding error in extents that are integral on paper
        let steps = (extent + 1e-9).floor();
        if !steps.is_finite() || steps < 0.0 {
            return Err(VolumeError::InvalidDims(dims));
        }
        out[a] = steps as usize + 1;
    }
    if out.iter().any(|&n| n < 1) {
        return Err(VolumeError::InvalidDims(out));
    }
    Ok(out)
}

/// Continuous input index for each output index along one axis, clamped to the grid.
fn axis_positions(n_out: usize, n_in: usize, s_old: f64, s_new: f64) -> Vec<f64> {
    let max = (n_in - 1) as f64;
    (0..n_out)
        .map(|i| (i as f64 * s_new / s_old).clamp(0.0, max))
        .collect()
}

fn lerp_weights(pos: f64, n_in: usize) -> (usize, usize, f64) {
    let lo = pos.floor() as usize;
    let lo = lo.min(n_in - 1);
    let hi = (lo + 1).min(n_in - 1);
    (lo, hi, pos - lo as f64)
}

/// Trilinear resampling onto a grid with `target_spacing`, sharing the input origin.
pub fn resample_trilinear(vol: &Volume3D, target_spacing: [f64; 3]) -> Result<Volume3D> {
    let dims = vol.dims();
    let spacing = vol.spacing();
    let out_dims = resample_output_dims(dims, spacing, target_spacing)?;
    if out_dims == dims && spacing == target_spacing {
        return Ok(vol.clone());
    }
    let wx: Vec<_> = axis_positions(out_dims[0], dims[0], spacing[0], target_spacing[0])
        .into_iter()
        .map(|p| lerp_weights(p, dims[0]))
        .collect();
    let wy: Vec<_> = axis_positions(out_dims[1], dims[1], spacing[1], target_spacing[1])
        .into_iter()
        .map(|p| lerp_weights(p, dims[1]))
        .collect();
    let wz: Vec<_> = axis_positions(out_dims[2], dims[2], spacing[2], target_spacing[2])
        .into_iter()
        .map(|p| lerp_weights(p, dims[2]))
        .collect();

    let mut data = Vec::with_capacity(out_dims.iter().product());
    for &(z0, z1, tz) in &wz {
        for &(y0, y1, ty) in &wy {
            for &(x0, x1, tx) in &wx {
                let c = |x, y, z| vol.get(x, y, z);
                let c00 = c(x0, y0, z0) * (1.0 - tx) + c(x1, y0, z0) * tx;
                let c10 = c(x0, y1, z0) * (1.0 - tx) + c(x1, y1, z0) * tx;
                let c01 = c(x0, y0, z1) * (1.0 - tx) + c(x1, y0, z1) * tx;
                let c11 = c(x0, y1, z1) * (1.0 - tx) + c(x1, y1, z1) * tx;
                let c0 = c00 * (1.0 - ty) + c10 * ty;
                let c1 = c01 * (1.0 - ty) + c11 * ty;
                data.push(c0 * (1.0 - tz) + c1 * tz);
            }
        }
    }
    Ok(Volume3D::new(out_dims, target_spacing, vol.origin(), data)?)
}

/// Nearest-neighbor companion of [`resample_trilinear`] for masks.
/// Exact half-way ties go to the higher input index.
pub fn resample_mask_nearest(mask: &Mask3D, spacing_old: [f64; 3], target_spacing: [f64; 3]) -> Result<Mask3D> {
    let dims = mask.dims();
    let out_dims = resample_output_dims(dims, spacing_old, target_spacing)?;
    let nearest = |a: usize| -> Vec<usize> {
        axis_positions(out_dims[a], dims[a], spacing_old[a], target_spacing[a])
            .into_iter()
            .map(|p| ((p + 0.5).floor() as usize).min(dims[a] - 1))
            .collect()
    };
    let (nx, ny, nz) = (nearest(0), nearest(1), nearest(2));
    Mask3D::from_fn(out_dims, |x, y, z| mask.get(nx[x], ny[y], nz[z]))
}
