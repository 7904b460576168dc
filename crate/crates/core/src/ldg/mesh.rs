/// Uniform mesh of `[0, S̄]` with cells `I_j = (S_j, S_{j+1}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    s_max: f64,
    cells: usize,
    width: f64,
}

impl Mesh {
    pub fn new(s_max: f64, cells: usize) -> Self {
        assert!(cells >= 1 && s_max > 0.0, "mesh needs a positive extent and at least one cell");
        Self {
            s_max,
            cells,
            width: s_max / cells as f64,
        }
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Node `S_j = j·h`.
    pub fn node(&self, j: usize) -> f64 {
        if j == self.cells {
            self.s_max
        } else {
            j as f64 * self.width
        }
    }

    /// Index of the cell containing `s`; nodes belong to the cell on their left.
    pub fn cell_of(&self, s: f64) -> usize {
        if s <= 0.0 {
            return 0;
        }
        let j = (s / self.width).ceil() as usize;
        j.saturating_sub(1).min(self.cells - 1)
    }

    /// Reference coordinate of `s` in cell `j`.
    pub fn to_reference(&self, j: usize, s: f64) -> f64 {
        2.0 * (s - self.node(j)) / self.width - 1.0
    }

    pub fn to_physical(&self, j: usize, xi: f64) -> f64 {
        self.node(j) + 0.5 * (xi + 1.0) * self.width
    }
}
