use font8x8::{UnicodeFonts, BASIC_FONTS};
use image::{Rgb, RgbImage};

pub type Color = Rgb<u8>;

pub const WHITE: Color = Rgb([255, 255, 255]);
pub const BLACK: Color = Rgb([0, 0, 0]);
pub const GRAY: Color = Rgb([128, 128, 128]);
pub const LIGHT: Color = Rgb([225, 225, 225]);
pub const DARK: Color = Rgb([40, 40, 40]);
pub const RED: Color = Rgb([220, 50, 47]);
pub const BLUE: Color = Rgb([38, 110, 210]);
pub const GREEN: Color = Rgb([60, 170, 80]);
pub const YELLOW: Color = Rgb([235, 200, 40]);
pub const BROWN: Color = Rgb([140, 90, 50]);
pub const PURPLE: Color = Rgb([130, 60, 160]);
pub const ORANGE: Color = Rgb([240, 140, 30]);
pub const TAN: Color = Rgb([222, 184, 135]);

/// Pixel-level drawing on an RGB raster with a built-in 8x8 bitmap font.
pub struct Canvas {
    img: RgbImage,
}

impl Canvas {
    pub fn new(width: u32, height: u32, background: Color) -> Self {
        Self { img: RgbImage::from_pixel(width, height, background) }
    }

    pub fn width(&self) -> i32 {
        self.img.width() as i32
    }

    pub fn height(&self) -> i32 {
        self.img.height() as i32
    }

    pub fn put(&mut self, x: i32, y: i32, c: Color) {
        if x >= 0 && y >= 0 && x < self.width() && y < self.height() {
            self.img.put_pixel(x as u32, y as u32, c);
        }
    }

    pub fn fill_rect(&mut self, x: i32, y: i32, w: i32, h: i32, c: Color) {
        for yy in y.max(0)..(y + h).min(self.height()) {
            for xx in x.max(0)..(x + w).min(self.width()) {
                self.img.put_pixel(xx as u32, yy as u32, c);
            }
        }
    }

    pub fn rect(&mut self, x: i32, y: i32, w: i32, h: i32, thickness: i32, c: Color) {
        self.fill_rect(x, y, w, thickness, c);
        self.fill_rect(x, y + h - thickness, w, thickness, c);
        self.fill_rect(x, y, thickness, h, c);
        self.fill_rect(x + w - thickness, y, thickness, h, c);
    }

    pub fn disc(&mut self, cx: i32, cy: i32, r: i32, c: Color) {
        for y in -r..=r {
            for x in -r..=r {
                if x * x + y * y <= r * r {
                    self.put(cx + x, cy + y, c);
                }
            }
        }
    }

    /// A disc with a wedge cut out on the side given by `(dx, dy)`.
    pub fn pacman(&mut self, cx: i32, cy: i32, r: i32, dir: (i32, i32), c: Color) {
        for y in -r..=r {
            for x in -r..=r {
                if x * x + y * y > r * r {
                    continue;
                }
                // inside the mouth when the point lies within 35 degrees of `dir`
                let along = x * dir.0 + y * dir.1;
                let across = (x * dir.1 - y * dir.0).abs();
                if along > 0 && across * 10 < along * 7 {
                    continue;
                }
                self.put(cx + x, cy + y, c);
            }
        }
    }

    pub fn text(&mut self, x: i32, y: i32, s: &str, scale: i32, c: Color) {
        let mut cx = x;
        for ch in s.chars() {
            if let Some(glyph) = BASIC_FONTS.get(ch) {
                for (row, bits) in glyph.iter().enumerate() {
                    for col in 0..8 {
                        if bits & (1 << col) != 0 {
                            self.fill_rect(cx + col * scale, y + row as i32 * scale, scale, scale, c);
                        }
                    }
                }
            }
            cx += 8 * scale;
        }
    }

    pub fn text_width(s: &str, scale: i32) -> i32 {
        s.chars().count() as i32 * 8 * scale
    }

    pub fn text_centered(&mut self, cx: i32, y: i32, s: &str, scale: i32, c: Color) {
        let w = Self::text_width(s, scale);
        self.text(cx - w / 2, y, s, scale, c);
    }

    pub fn finish(self) -> RgbImage {
        self.img
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_draws_glyph_pixels() {
        let mut c = Canvas::new(32, 16, WHITE);
        c.text(0, 0, "A", 1, BLACK);
        let img = c.finish();
        assert!(img.pixels().any(|p| *p == BLACK));
    }

    #[test]
    fn drawing_clips_at_edges() {
        let mut c = Canvas::new(10, 10, WHITE);
        c.fill_rect(-5, -5, 30, 30, RED);
        c.disc(0, 0, 20, BLUE);
        c.text(8, 8, "WW", 3, BLACK);
        assert_eq!(c.finish().dimensions(), (10, 10));
    }
}
