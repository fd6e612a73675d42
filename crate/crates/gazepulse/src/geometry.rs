//! Pixel-space rectangles shared by the generator, preprocessing, and the
//! baseline ROI pipeline.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Axis-aligned rectangle in frame coordinates; `x` is the column, `y` the
/// row, ends exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl Rect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> usize {
        self.x1.saturating_sub(self.x0)
    }

    pub fn height(&self) -> usize {
        self.y1.saturating_sub(self.y0)
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    /// Check the rectangle is non-empty and inside an `(h, w)` frame.
    pub fn validate(&self, frame_h: usize, frame_w: usize) -> Result<()> {
        if self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(Error::InvalidRoi(format!("empty rectangle {self:?}")));
        }
        if self.x1 > frame_w || self.y1 > frame_h {
            return Err(Error::InvalidRoi(format!(
                "rectangle {self:?} outside {frame_w}x{frame_h} frame"
            )));
        }
        Ok(())
    }
}
