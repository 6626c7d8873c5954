use crate::imgvol::Volume3D;

use super::{FilterError, Result};

fn gaussian_kernel(sigma_vox: f64, radius: usize) -> Vec<f64> {
    let mut k: Vec<f64> = (0..=2 * radius)
        .map(|i| {
            let t = i as f64 - radius as f64;
            (-0.5 * t * t / (sigma_vox * sigma_vox)).exp()
        })
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|w| *w /= sum);
    k
}

/// Convolves every line along `axis` with `kernel`, replicating edge voxels.
fn convolve_axis(data: &[f64], dims: [usize; 3], axis: usize, kernel: &[f64]) -> Vec<f64> {
    let radius = (kernel.len() / 2) as isize;
    let stride = match axis {
        0 => 1,
        1 => dims[0],
        _ => dims[0] * dims[1],
    };
    let len = dims[axis] as isize;
    let mut out = vec![0.0; data.len()];
    let mut line = vec![0.0; dims[axis]];
    for start in 0..data.len() {
        // visit each line once, from its first voxel
        let coord = (start / stride) % dims[axis];
        if coord != 0 {
            continue;
        }
        for (i, v) in line.iter_mut().enumerate() {
            *v = data[start + i * stride];
        }
        for i in 0..len {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                let j = (i + k as isize - radius).clamp(0, len - 1);
                acc += w * line[j as usize];
            }
            out[start + i as usize * stride] = acc;
        }
    }
    out
}

/// Separable Gaussian smoothing with `sigma_mm` in physical units. The kernel
/// is truncated at `ceil(4 sigma / spacing)` voxels and renormalized.
pub fn gaussian_blur(vol: &Volume3D, sigma_mm: f64) -> Result<Volume3D> {
    if !sigma_mm.is_finite() || sigma_mm <= 0.0 {
        return Err(FilterError::InvalidSigma(sigma_mm));
    }
    let dims = vol.dims();
    let spacing = vol.spacing();
    let mut data = vol.data().to_vec();
    for axis in 0..3 {
        let sigma_vox = sigma_mm / spacing[axis];
        let radius = (4.0 * sigma_vox).ceil() as usize;
        if radius >= dims[axis] && dims[axis] > 1 {
            return Err(FilterError::KernelTooLarge {
                axis,
                radius,
                len: dims[axis],
            });
        }
        if dims[axis] == 1 {
            // a single-voxel line is unchanged by a normalized kernel under edge replication
            continue;
        }
        data = convolve_axis(&data, dims, axis, &gaussian_kernel(sigma_vox, radius));
    }
    Ok(vol.with_data(data)?)
}

/// 6-neighbor discrete Laplacian in physical units, edge-replicated.
pub fn laplacian(vol: &Volume3D) -> Volume3D {
    let [nx, ny, nz] = vol.dims();
    let s = vol.spacing();
    let inv = [1.0 / (s[0] * s[0]), 1.0 / (s[1] * s[1]), 1.0 / (s[2] * s[2])];
    let mut out = Vec::with_capacity(vol.len());
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let c = vol.get(x, y, z);
                let xm = vol.get(x.saturating_sub(1), y, z);
                let xp = vol.get((x + 1).min(nx - 1), y, z);
                let ym = vol.get(x, y.saturating_sub(1), z);
                let yp = vol.get(x, (y + 1).min(ny - 1), z);
                let zm = vol.get(x, y, z.saturating_sub(1));
                let zp = vol.get(x, y, (z + 1).min(nz - 1));
                out.push((xm - 2.0 * c + xp) * inv[0] + (ym - 2.0 * c + yp) * inv[1] + (zm - 2.0 * c + zp) * inv[2]);
            }
        }
    }
    vol.with_data(out).expect("laplacian of finite data is finite")
}

/// Scale-normalized Laplacian of Gaussian: `sigma^2 * laplacian(gaussian_blur(vol))`.
pub fn log_filter(vol: &Volume3D, sigma_mm: f64) -> Result<Volume3D> {
    let blurred = gaussian_blur(vol, sigma_mm)?;
    let lap = laplacian(&blurred);
    let s2 = sigma_mm * sigma_mm;
    let data = lap.data().iter().map(|v| v * s2).collect();
    Ok(vol.with_data(data)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gives_zero() {
        let v = Volume3D::filled([12, 12, 12], [1.0; 3], 3.5).unwrap();
        let out = log_filter(&v, 1.0).unwrap();
        assert!(out.data().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn quadratic_field_interior_curvature() {
        let spacing = [0.8, 1.0, 1.25];
        let sigma = 1.0;
        let v = Volume3D::from_fn([24, 12, 12], spacing, |x, _, _| (x as f64 * spacing[0]).powi(2)).unwrap();
        let out = log_filter(&v, sigma).unwrap();
        // interior: at least one kernel radius plus one voxel away from the x borders
        let r = (4.0 * sigma / spacing[0]).ceil() as usize + 1;
        for z in 0..12 {
            for y in 0..12 {
                for x in r..24 - r {
                    let got = out.get(x, y, z);
                    assert!((got - 2.0 * sigma * sigma).abs() < 0.02 * 2.0, "x={x} got {got}");
                }
            }
        }
    }

    #[test]
    fn impulse_response_has_cubic_symmetry() {
        let n = 15;
        let c = 7;
        let v = Volume3D::from_fn([n; 3], [1.0; 3], |x, y, z| if (x, y, z) == (c, c, c) { 1.0 } else { 0.0 }).unwrap();
        let out = log_filter(&v, 1.5).unwrap();
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let scale = out.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    let p = [x, y, z];
                    let base = out.get(x, y, z);
                    for perm in &perms {
                        for flips in 0..8 {
                            let mut q = [p[perm[0]], p[perm[1]], p[perm[2]]];
                            for (a, qa) in q.iter_mut().enumerate() {
                                if flips & (1 << a) != 0 {
                                    *qa = n - 1 - *qa;
                                }
                            }
                            let other = out.get(q[0], q[1], q[2]);
                            assert!((base - other).abs() <= 1e-12 * scale);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn linear_in_input() {
        let u = Volume3D::from_fn([10, 9, 8], [1.0, 1.2, 0.9], |x, y, z| ((x * 7 + y * 3 + z) % 13) as f64).unwrap();
        let w = Volume3D::from_fn([10, 9, 8], [1.0, 1.2, 0.9], |x, y, z| (x as f64 - y as f64).sin() + z as f64).unwrap();
        let (a, b) = (2.5, -0.75);
        let combo = u.with_data(u.data().iter().zip(w.data()).map(|(p, q)| a * p + b * q).collect()).unwrap();
        let lhs = log_filter(&combo, 1.0).unwrap();
        let lu = log_filter(&u, 1.0).unwrap();
        let lw = log_filter(&w, 1.0).unwrap();
        for i in 0..lhs.len() {
            assert!((lhs.data()[i] - (a * lu.data()[i] + b * lw.data()[i])).abs() < 1e-9);
        }
    }

    #[test]
    fn interior_blob_response_sums_to_zero() {
        let n = 31;
        let v = Volume3D::from_fn([n; 3], [1.0; 3], |x, y, z| {
            let d2 = [x, y, z].iter().map(|&c| (c as f64 - 15.0).powi(2)).sum::<f64>();
            if d2 <= 9.0 { 1.0 } else { 0.0 }
        })
        .unwrap();
        let out = log_filter(&v, 1.0).unwrap();
        let total: f64 = out.data().iter().sum();
        let mass: f64 = out.data().iter().map(|x| x.abs()).sum();
        assert!(total.abs() < 1e-9 * mass.max(1.0), "sum {total}");
    }

    #[test]
    fn oversized_kernel_and_bad_sigma() {
        let v = Volume3D::filled([8, 8, 8], [1.0; 3], 1.0).unwrap();
        assert!(matches!(log_filter(&v, 2.0), Err(FilterError::KernelTooLarge { .. })));
        assert!(matches!(log_filter(&v, 0.0), Err(FilterError::InvalidSigma(_))));
        assert!(matches!(log_filter(&v, -1.0), Err(FilterError::InvalidSigma(_))));
    }
}
