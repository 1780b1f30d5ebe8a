//! 8-connected component labelling and region properties.

use super::{cartesian, BinaryImage, Point};

/// A maximal 8-connected set of foreground pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// Member pixels as `(col, row)`, in raster order.
    pub pixels: Vec<(usize, usize)>,
    pub area: usize,
    pub centroid: Point,
    pub eccentricity: f64,
    /// `(min_col, min_row, max_col, max_row)`.
    pub bbox: (usize, usize, usize, usize),
    pub touches_border: bool,
}

impl Region {
    fn from_pixels(pixels: Vec<(usize, usize)>, width: usize, height: usize) -> Region {
        let n = pixels.len() as f64;
        let (mut sx, mut sy) = (0.0, 0.0);
        let mut bbox = (usize::MAX, usize::MAX, 0, 0);
        for &(c, r) in &pixels {
            let p = cartesian(height, c as f64, r as f64);
            sx += p.x;
            sy += p.y;
            bbox.0 = bbox.0.min(c);
            bbox.1 = bbox.1.min(r);
            bbox.2 = bbox.2.max(c);
            bbox.3 = bbox.3.max(r);
        }
        let centroid = Point::new(sx / n, sy / n);

        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for &(c, r) in &pixels {
            let p = cartesian(height, c as f64, r as f64);
            let (dx, dy) = (p.x - centroid.x, p.y - centroid.y);
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
        let eccentricity = eccentricity_from_moments(sxx / n, syy / n, sxy / n);

        let touches_border =
            bbox.0 == 0 || bbox.1 == 0 || bbox.2 + 1 == width || bbox.3 + 1 == height;
        Region {
            area: pixels.len(),
            pixels,
            centroid,
            eccentricity,
            bbox,
            touches_border,
        }
    }
}

/// `sqrt(1 - λ₂/λ₁)` from the second central moments, 0 when `λ₁ == 0`.
pub(crate) fn eccentricity_from_moments(mxx: f64, myy: f64, mxy: f64) -> f64 {
    let mean = 0.5 * (mxx + myy);
    let spread = (0.25 * (mxx - myy).powi(2) + mxy * mxy).sqrt();
    let l1 = mean + spread;
    let l2 = (mean - spread).max(0.0);
    if l1 <= f64::EPSILON * mean.abs().max(1.0) {
        return 0.0;
    }
    (1.0 - l2 / l1).clamp(0.0, 1.0).sqrt()
}

struct DisjointSets {
    parent: Vec<u32>,
}

impl DisjointSets {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Two-pass union-find labelling. Regions are ordered by their first pixel
/// in raster order.
pub fn connected_components(img: &BinaryImage) -> Vec<Region> {
    let (w, h) = (img.width(), img.height());
    const NONE: u32 = u32::MAX;
    let mut labels = vec![NONE; w * h];
    let mut sets = DisjointSets { parent: Vec::new() };

    for row in 0..h {
        for col in 0..w {
            if !img.get(col, row) {
                continue;
            }
            // already-visited neighbours: W, NW, N, NE
            let mut current = NONE;
            let candidates = [
                (col > 0).then(|| (col - 1, row)),
                (col > 0 && row > 0).then(|| (col - 1, row - 1)),
                (row > 0).then(|| (col, row - 1)),
                (row > 0 && col + 1 < w).then(|| (col + 1, row - 1)),
            ];
            for (c, r) in candidates.into_iter().flatten() {
                let label = labels[r * w + c];
                if label == NONE {
                    continue;
                }
                if current == NONE {
                    current = label;
                } else {
                    sets.union(current, label);
                }
            }
            if current == NONE {
                current = sets.parent.len() as u32;
                sets.parent.push(current);
            }
            labels[row * w + col] = current;
        }
    }

    let mut slot_of_root = vec![NONE; sets.parent.len()];
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    for row in 0..h {
        for col in 0..w {
            let label = labels[row * w + col];
            if label == NONE {
                continue;
            }
            let root = sets.find(label) as usize;
            if slot_of_root[root] == NONE {
                slot_of_root[root] = groups.len() as u32;
                groups.push(Vec::new());
            }
            groups[slot_of_root[root] as usize].push((col, row));
        }
    }
    groups
        .into_iter()
        .map(|pixels| Region::from_pixels(pixels, w, h))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_image_has_no_regions() {
        assert!(connected_components(&BinaryImage::empty(4, 4)).is_empty());
    }

    #[test]
    fn single_pixel_region() {
        let mut img = BinaryImage::empty(5, 5);
        img.set(2, 1, true);
        let regions = connected_components(&img);
        assert_eq!(regions.len(), 1);
        let r = &regions[0];
        assert_eq!(r.area, 1);
        assert_eq!(r.eccentricity, 0.0);
        assert_eq!(r.centroid, Point::new(2.0, 3.0));
        assert!(!r.touches_border);
    }

    #[test]
    fn horizontal_run_is_degenerate() {
        let img = BinaryImage::from_fn(9, 3, |c, r| r == 1 && (1..8).contains(&c));
        let regions = connected_components(&img);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].area, 7);
        assert!((regions[0].eccentricity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_neighbours_join() {
        let img = BinaryImage::from_fn(4, 4, |c, r| c == r);
        assert_eq!(connected_components(&img).len(), 1);
        // anti-diagonal through NE links
        let img = BinaryImage::from_fn(4, 4, |c, r| c + r == 3);
        assert_eq!(connected_components(&img).len(), 1);
    }

    #[test]
    fn u_shape_merges_labels() {
        let img = BinaryImage::from_fn(5, 4, |c, r| c == 0 || c == 4 || r == 3);
        let regions = connected_components(&img);
        assert_eq!(regions.len(), 1);
        assert_eq!(regions[0].area, 11);
        assert!(regions[0].touches_border);
    }
}
