//! Minimal raster buffers with binary PPM (P6) and PBM (P4) encoders.

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<Rgb>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize) -> Self {
        RgbImage { width, height, pixels: vec![[0, 0, 0]; width * height] }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, color: Rgb) {
        self.pixels[y * self.width + x] = color;
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }
}

/// Row-major bit matrix; PBM convention, a set bit renders black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    width: usize,
    bits: Vec<bool>,
}

impl BitMatrix {
    pub fn new(width: usize) -> Self {
        BitMatrix { width, bits: Vec::new() }
    }

    pub fn push_row(&mut self, row: &[bool]) {
        assert_eq!(row.len(), self.width, "row width mismatch");
        self.bits.extend_from_slice(row);
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.bits.len().checked_div(self.width).unwrap_or(0)
    }

    pub fn row(&self, y: usize) -> &[bool] {
        &self.bits[y * self.width..(y + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.bits.chunks_exact(self.width.max(1))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn to_pbm(&self) -> Vec<u8> {
        let mut out = format!("P4\n{} {}\n", self.width, self.height()).into_bytes();
        for row in self.rows() {
            for chunk in row.chunks(8) {
                let mut byte = 0u8;
                for (i, &b) in chunk.iter().enumerate() {
                    if b {
                        byte |= 0x80 >> i;
                    }
                }
                out.push(byte);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppm_header_is_exact() {
        assert_eq!(RgbImage::new(1, 1).to_ppm(), b"P6\n1 1\n255\n\0\0\0".to_vec());
    }

    #[test]
    fn pbm_pads_rows_to_bytes() {
        let mut m = BitMatrix::new(10);
        let mut row = [false; 10];
        row[0] = true;
        row[9] = true;
        m.push_row(&row);
        assert_eq!(m.to_pbm(), b"P4\n10 1\n\x80\x40".to_vec());
    }
}
