//! NIfTI-1 reading and writing for label volumes.
//!
//! Reads single-file (`n+1`) and paired header/image (`ni1`) layouts in
//! either byte order, gzip-compressed or not. Always writes single-file,
//! little-endian, uint8 data.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use super::{Label, LabelVolume};
use crate::error::{Error, Result};

const HEADER_SIZE: usize = 348;
const SINGLE_FILE_OFFSET: usize = 352;

const DT_UINT8: i16 = 2;
const DT_INT16: i16 = 4;
const DT_INT32: i16 = 8;
const DT_FLOAT32: i16 = 16;
const DT_UINT16: i16 = 512;

/// Orientation and unit fields carried from input to output unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct NiftiMeta {
    pub qfac: f32,
    pub xyzt_units: u8,
    pub qform_code: i16,
    pub sform_code: i16,
    pub quatern: [f32; 3],
    pub qoffset: [f32; 3],
    pub srow: [[f32; 4]; 3],
}

impl Default for NiftiMeta {
    fn default() -> Self {
        NiftiMeta {
            qfac: 1.0,
            // millimetres
            xyzt_units: 2,
            qform_code: 0,
            sform_code: 0,
            quatern: [0.0; 3],
            qoffset: [0.0; 3],
            srow: [[0.0; 4]; 3],
        }
    }
}

/// Strips `.nii`, `.nii.gz`, `.hdr` or `.hdr.gz` from a file name.
pub fn case_id_from_path(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    for ext in [".nii.gz", ".nii", ".hdr.gz", ".hdr"] {
        if let Some(stem) = name.strip_suffix(ext) {
            return stem.to_string();
        }
    }
    name
}

/// True for names this module can read.
pub fn is_volume_path(path: &Path) -> bool {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    name.ends_with(".nii") || name.ends_with(".nii.gz")
}

fn read_maybe_gz(path: &Path) -> Result<Vec<u8>> {
    let mut raw = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut raw))
        .map_err(|e| Error::io(path, e))?;
    if raw.len() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b {
        let mut out = Vec::new();
        GzDecoder::new(&raw[..])
            .read_to_end(&mut out)
            .map_err(|e| Error::format(path, format!("gzip: {e}")))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

#[derive(Clone, Copy)]
struct Reader<'a> {
    bytes: &'a [u8],
    big_endian: bool,
}

impl Reader<'_> {
    fn arr<const N: usize>(&self, off: usize) -> [u8; N] {
        let mut a = [0u8; N];
        a.copy_from_slice(&self.bytes[off..off + N]);
        if self.big_endian {
            a.reverse();
        }
        a
    }
    fn i16(&self, off: usize) -> i16 {
        i16::from_le_bytes(self.arr(off))
    }
    fn i32(&self, off: usize) -> i32 {
        i32::from_le_bytes(self.arr(off))
    }
    fn u16(&self, off: usize) -> u16 {
        u16::from_le_bytes(self.arr(off))
    }
    fn f32(&self, off: usize) -> f32 {
        f32::from_le_bytes(self.arr(off))
    }
}

/// Reads a 3D NIfTI-1 label volume.
pub fn load_volume(path: impl AsRef<Path>) -> Result<LabelVolume> {
    let path = path.as_ref();
    let bytes = read_maybe_gz(path)?;
    let fail = |reason: String| Error::format(path, reason);
    if bytes.len() < HEADER_SIZE {
        return Err(fail(format!(
            "file holds {} bytes, header needs 348",
            bytes.len()
        )));
    }

    let le = Reader {
        bytes: &bytes,
        big_endian: false,
    };
    let r = if le.i32(0) == HEADER_SIZE as i32 {
        le
    } else if (Reader {
        big_endian: true,
        ..le
    })
    .i32(0)
        == HEADER_SIZE as i32
    {
        Reader {
            big_endian: true,
            ..le
        }
    } else {
        return Err(fail(format!("sizeof_hdr is {}, expected 348", le.i32(0))));
    };

    let magic = &bytes[344..348];
    let paired = match magic {
        b"n+1\0" => false,
        b"ni1\0" => true,
        _ => {
            return Err(fail(format!(
                "bad magic {:?}",
                String::from_utf8_lossy(magic)
            )))
        }
    };

    let ndim = r.i16(40);
    if ndim != 3 {
        return Err(fail(format!("expected a 3D volume, dim[0] = {ndim}")));
    }
    let mut dims = [0usize; 3];
    for a in 0..3 {
        let d = r.i16(42 + 2 * a);
        if d <= 0 {
            return Err(fail(format!("dim[{}] = {d} is not positive", a + 1)));
        }
        dims[a] = d as usize;
    }
    let mut spacing = [0f64; 3];
    for a in 0..3 {
        let p = r.f32(80 + 4 * a);
        if !(p.is_finite() && p > 0.0) {
            return Err(fail(format!("pixdim[{}] = {p} is not positive", a + 1)));
        }
        spacing[a] = p as f64;
    }

    let datatype = r.i16(70);
    let width = match datatype {
        DT_UINT8 => 1,
        DT_INT16 | DT_UINT16 => 2,
        DT_INT32 | DT_FLOAT32 => 4,
        other => return Err(fail(format!("unsupported datatype {other}"))),
    };

    let vox_offset = r.f32(108);
    let (mut slope, mut inter) = (r.f32(112) as f64, r.f32(116) as f64);
    if slope == 0.0 || !slope.is_finite() || !inter.is_finite() {
        slope = 1.0;
        inter = 0.0;
    }

    let n = dims.iter().product::<usize>();
    let image_bytes;
    let data: &[u8] = if paired {
        image_bytes = read_maybe_gz(&companion_image(path)?)?;
        let off = vox_offset.max(0.0) as usize;
        image_bytes.get(off..).unwrap_or(&[])
    } else {
        let off = (vox_offset as usize).max(HEADER_SIZE);
        bytes.get(off..).unwrap_or(&[])
    };
    if data.len() < n * width {
        return Err(fail(format!(
            "image data holds {} bytes, need {}",
            data.len(),
            n * width
        )));
    }

    let dr = Reader {
        bytes: data,
        big_endian: r.big_endian,
    };
    let mut labels: Vec<Label> = Vec::with_capacity(n);
    for i in 0..n {
        let raw = match datatype {
            DT_UINT8 => data[i] as f64,
            DT_INT16 => dr.i16(2 * i) as f64,
            DT_UINT16 => dr.u16(2 * i) as f64,
            DT_INT32 => dr.i32(4 * i) as f64,
            _ => dr.f32(4 * i) as f64,
        };
        let v = raw * slope + inter;
        if !v.is_finite() || v.fract() != 0.0 {
            return Err(fail(format!("voxel {i} holds non-integer value {v}")));
        }
        if !(0.0..256.0).contains(&v) {
            return Err(fail(format!("voxel {i} holds label {v}, outside 0..=255")));
        }
        labels.push(v as Label);
    }

    let meta = NiftiMeta {
        qfac: r.f32(76),
        xyzt_units: bytes[123],
        qform_code: r.i16(252),
        sform_code: r.i16(254),
        quatern: [r.f32(256), r.f32(260), r.f32(264)],
        qoffset: [r.f32(268), r.f32(272), r.f32(276)],
        srow: [0, 1, 2].map(|row| [0, 1, 2, 3].map(|c| r.f32(280 + 16 * row + 4 * c))),
    };

    Ok(
        LabelVolume::new(dims, spacing, labels, case_id_from_path(path))
            .map_err(|e| fail(e.to_string()))?
            .with_meta(meta),
    )
}

fn companion_image(header: &Path) -> Result<PathBuf> {
    let name = header.to_string_lossy();
    let candidates: Vec<PathBuf> = if let Some(stem) = name.strip_suffix(".hdr.gz") {
        vec![
            format!("{stem}.img.gz").into(),
            format!("{stem}.img").into(),
        ]
    } else if let Some(stem) = name.strip_suffix(".hdr") {
        vec![
            format!("{stem}.img").into(),
            format!("{stem}.img.gz").into(),
        ]
    } else {
        vec![]
    };
    candidates
        .into_iter()
        .find(|p| p.exists())
        .ok_or_else(|| Error::format(header, "paired header without an .img file"))
}

/// Serializes a volume as single-file little-endian NIfTI-1 bytes.
pub fn encode_volume(vol: &LabelVolume) -> Vec<u8> {
    let mut h = vec![0u8; SINGLE_FILE_OFFSET];
    let put = |h: &mut Vec<u8>, off: usize, b: &[u8]| h[off..off + b.len()].copy_from_slice(b);
    let meta = vol.meta();

    put(&mut h, 0, &(HEADER_SIZE as i32).to_le_bytes());
    h[38] = b'r';
    let dims = vol.dims();
    let dim: [i16; 8] = [
        3,
        dims[0] as i16,
        dims[1] as i16,
        dims[2] as i16,
        1,
        1,
        1,
        1,
    ];
    for (k, d) in dim.iter().enumerate() {
        put(&mut h, 40 + 2 * k, &d.to_le_bytes());
    }
    put(&mut h, 70, &DT_UINT8.to_le_bytes());
    put(&mut h, 72, &8i16.to_le_bytes());
    let sp = vol.spacing();
    let pixdim: [f32; 8] = [
        meta.qfac,
        sp[0] as f32,
        sp[1] as f32,
        sp[2] as f32,
        0.0,
        0.0,
        0.0,
        0.0,
    ];
    for (k, p) in pixdim.iter().enumerate() {
        put(&mut h, 76 + 4 * k, &p.to_le_bytes());
    }
    put(&mut h, 108, &(SINGLE_FILE_OFFSET as f32).to_le_bytes());
    put(&mut h, 112, &1f32.to_le_bytes());
    put(&mut h, 116, &0f32.to_le_bytes());
    h[123] = meta.xyzt_units;
    put(&mut h, 252, &meta.qform_code.to_le_bytes());
    put(&mut h, 254, &meta.sform_code.to_le_bytes());
    for k in 0..3 {
        put(&mut h, 256 + 4 * k, &meta.quatern[k].to_le_bytes());
        put(&mut h, 268 + 4 * k, &meta.qoffset[k].to_le_bytes());
    }
    for row in 0..3 {
        for c in 0..4 {
            put(
                &mut h,
                280 + 16 * row + 4 * c,
                &meta.srow[row][c].to_le_bytes(),
            );
        }
    }
    put(&mut h, 344, b"n+1\0");

    h.extend_from_slice(vol.labels());
    h
}

/// Writes `vol` as uint8 NIfTI-1; gzip-compressed when the path ends in `.gz`.
pub fn save_volume(vol: &LabelVolume, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_volume(vol);
    let gz = path.to_string_lossy().ends_with(".gz");
    let write = || -> std::io::Result<()> {
        let file = File::create(path)?;
        if gz {
            let mut enc = GzEncoder::new(file, Compression::default());
            enc.write_all(&bytes)?;
            enc.finish()?.flush()
        } else {
            let mut file = file;
            file.write_all(&bytes)?;
            file.flush()
        }
    };
    write().map_err(|e| Error::io(path, e))
}
