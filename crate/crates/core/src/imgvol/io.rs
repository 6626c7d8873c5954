use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Mask3D, Result, Volume3D, VolumeError};

/// JSON header describing a raw voxel file (little-endian float32, x-fastest)
/// and an optional uint8 mask file on the same grid. File names are resolved
/// relative to the header's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeHeader {
    pub dims: [usize; 3],
    pub spacing_mm: [f64; 3],
    pub origin_mm: [f64; 3],
    pub data_file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask_file: Option<String>,
}

fn io_err(path: &Path, source: std::io::Error) -> VolumeError {
    VolumeError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn header_err(path: &Path, message: impl Into<String>) -> VolumeError {
    VolumeError::Header {
        path: path.display().to_string(),
        message: message.into(),
    }
}

fn sibling(header_path: &Path, name: &str) -> PathBuf {
    header_path
        .parent()
        .map(|p| p.join(name))
        .unwrap_or_else(|| PathBuf::from(name))
}

/// Reads a header/raw pair, plus the mask if the header references one.
pub fn load_volume(path: impl AsRef<Path>) -> Result<(Volume3D, Option<Mask3D>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let header: VolumeHeader = serde_json::from_str(&text).map_err(|e| header_err(path, e.to_string()))?;
    let n = super::check_dims(header.dims)?;

    let data_path = sibling(path, &header.data_file);
    let bytes = fs::read(&data_path).map_err(|e| io_err(&data_path, e))?;
    if bytes.len() != n * 4 {
        return Err(VolumeError::SizeMismatch {
            expected: n,
            actual: bytes.len() / 4,
        });
    }
    let data: Vec<f64> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    let vol = Volume3D::new(header.dims, header.spacing_mm, header.origin_mm, data)?;

    let mask = match &header.mask_file {
        None => None,
        Some(name) => {
            let mask_path = sibling(path, name);
            let bytes = fs::read(&mask_path).map_err(|e| io_err(&mask_path, e))?;
            if bytes.len() != n {
                return Err(VolumeError::SizeMismatch {
                    expected: n,
                    actual: bytes.len(),
                });
            }
            let mut voxels = Vec::with_capacity(n);
            for (i, b) in bytes.into_iter().enumerate() {
                match b {
                    0 => voxels.push(false),
                    1 => voxels.push(true),
                    other => {
                        return Err(header_err(
                            &mask_path,
                            format!("mask byte {other} at index {i} is not 0 or 1"),
                        ))
                    }
                }
            }
            Some(Mask3D::new(header.dims, voxels)?)
        }
    };
    Ok((vol, mask))
}

/// Writes `path` (JSON header) next to `<stem>.raw` and, when a mask is
/// given, `<stem>_mask.raw`. Voxel values are stored as float32.
pub fn save_volume(vol: &Volume3D, mask: Option<&Mask3D>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if let Some(m) = mask {
        m.check_matches(vol)?;
    }
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| header_err(path, "header path has no file stem"))?;
    let data_file = format!("{stem}.raw");
    let mask_file = mask.map(|_| format!("{stem}_mask.raw"));

    let mut raw = Vec::with_capacity(vol.len() * 4);
    for &v in vol.data() {
        raw.extend_from_slice(&(v as f32).to_le_bytes());
    }
    let data_path = sibling(path, &data_file);
    fs::write(&data_path, raw).map_err(|e| io_err(&data_path, e))?;

    if let (Some(m), Some(name)) = (mask, &mask_file) {
        let bytes: Vec<u8> = m.voxels().iter().map(|&b| b as u8).collect();
        let mask_path = sibling(path, name);
        fs::write(&mask_path, bytes).map_err(|e| io_err(&mask_path, e))?;
    }

    let header = VolumeHeader {
        dims: vol.dims(),
        spacing_mm: vol.spacing(),
        origin_mm: vol.origin(),
        data_file,
        mask_file,
    };
    let mut text = serde_json::to_string_pretty(&header).map_err(|e| header_err(path, e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}
