//! Per-region statistics and the region adjacency graph.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::raster::{LabelMap, RasterImage};

/// Pixel neighborhood used for adjacency and connectivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

/// Area, mean spectral vector, and accumulated saliency of one region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionStats {
    pub label: u32,
    pub area: usize,
    pub mean: Vec<f64>,
    /// Filled in by saliency accumulation; starts at 0.
    pub saliency_sum: f64,
}

/// An undirected adjacency edge between two region labels, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub weight: f64,
}

/// Region adjacency graph; edges are unique, sorted by `(a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyGraph {
    pub region_count: usize,
    pub edges: Vec<Edge>,
}

impl AdjacencyGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Renumbers labels to `0..n` in first-occurrence (row-major) order.
/// Returns the new map and the old→new mapping.
pub fn compact_labels(lm: &LabelMap) -> (LabelMap, BTreeMap<u32, u32>) {
    let mut mapping = BTreeMap::new();
    let mut next = 0u32;
    let labels = lm
        .labels()
        .iter()
        .map(|&old| {
            *mapping.entry(old).or_insert_with(|| {
                let new = next;
                next += 1;
                new
            })
        })
        .collect();
    let compacted = LabelMap::new(lm.width(), lm.height(), labels)
        .expect("dimensions unchanged by compaction");
    (compacted, mapping)
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            self.parent[x as usize] = self.parent[self.parent[x as usize] as usize];
            x = self.parent[x as usize];
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

/// Splits every label into its connected components, then compacts.
/// Idempotent: a map whose labels are already connected is unchanged.
pub fn enforce_connectivity(lm: &LabelMap, connectivity: Connectivity) -> LabelMap {
    let (w, h) = (lm.width(), lm.height());
    let labels = lm.labels();
    let mut uf = UnionFind::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w && labels[i] == labels[i + 1] {
                uf.union(i as u32, (i + 1) as u32);
            }
            if y + 1 < h {
                if labels[i] == labels[i + w] {
                    uf.union(i as u32, (i + w) as u32);
                }
                if connectivity == Connectivity::Eight {
                    if x > 0 && labels[i] == labels[i + w - 1] {
                        uf.union(i as u32, (i + w - 1) as u32);
                    }
                    if x + 1 < w && labels[i] == labels[i + w + 1] {
                        uf.union(i as u32, (i + w + 1) as u32);
                    }
                }
            }
        }
    }
    let roots: Vec<u32> = (0..(w * h) as u32).map(|i| uf.find(i)).collect();
    let components = LabelMap::new(w, h, roots).expect("same dimensions");
    compact_labels(&components).0
}

/// Computes area and mean spectral vector per region.
/// Requires a compacted label map whose dimensions match the image.
pub fn region_stats(img: &RasterImage, lm: &LabelMap) -> Result<Vec<RegionStats>> {
    lm.check_matches(img)?;
    let n = lm.max_label() as usize + 1;
    let c = img.channels();
    let mut areas = vec![0usize; n];
    let mut sums = vec![0.0f64; n * c];
    for (i, &label) in lm.labels().iter().enumerate() {
        let r = label as usize;
        areas[r] += 1;
        let pixel = &img.data()[i * c..(i + 1) * c];
        for (acc, &v) in sums[r * c..(r + 1) * c].iter_mut().zip(pixel) {
            *acc += v;
        }
    }
    assert!(
        areas.iter().all(|&a| a > 0),
        "label map must be compacted before region_stats"
    );
    Ok(areas
        .iter()
        .enumerate()
        .map(|(r, &area)| RegionStats {
            label: r as u32,
            area,
            mean: sums[r * c..(r + 1) * c]
                .iter()
                .map(|&s| s / area as f64)
                .collect(),
            saliency_sum: 0.0,
        })
        .collect())
}

/// Builds the adjacency graph of a compacted label map.
/// Weights start at 0; [`weight_graph`](crate::quality::weight_graph)
/// fills them in.
pub fn build_adjacency(lm: &LabelMap, connectivity: Connectivity) -> AdjacencyGraph {
    let (w, h) = (lm.width(), lm.height());
    let labels = lm.labels();
    let mut pairs = std::collections::BTreeSet::new();
    let mut touch = |a: u32, b: u32| {
        if a != b {
            pairs.insert((a.min(b), a.max(b)));
        }
    };
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w {
                touch(labels[i], labels[i + 1]);
            }
            if y + 1 < h {
                touch(labels[i], labels[i + w]);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        touch(labels[i], labels[i + w - 1]);
                    }
                    if x + 1 < w {
                        touch(labels[i], labels[i + w + 1]);
                    }
                }
            }
        }
    }
    AdjacencyGraph {
        region_count: lm.max_label() as usize + 1,
        edges: pairs
            .into_iter()
            .map(|(a, b)| Edge { a, b, weight: 0.0 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::ColorSpace;

    fn map(w: usize, h: usize, labels: &[u32]) -> LabelMap {
        LabelMap::new(w, h, labels.to_vec()).unwrap()
    }

    #[test]
    fn compaction_follows_first_occurrence() {
        let (lm, mapping) = compact_labels(&map(2, 2, &[7, 7, 3, 3]));
        assert_eq!(lm.labels(), &[0, 0, 1, 1]);
        assert_eq!(mapping, BTreeMap::from([(7, 0), (3, 1)]));
    }

    #[test]
    fn compaction_of_compact_map_is_identity() {
        let (lm, mapping) = compact_labels(&map(2, 1, &[0, 1]));
        assert_eq!(lm.labels(), &[0, 1]);
        assert!(mapping.iter().all(|(old, new)| old == new));
    }

    #[test]
    fn singleton_map_compacts_to_zero() {
        let (lm, _) = compact_labels(&map(1, 1, &[5]));
        assert_eq!(lm.labels(), &[0]);
    }

    #[test]
    fn disjoint_blobs_are_split() {
        let lm = map(3, 1, &[0, 1, 0]);
        let out = enforce_connectivity(&lm, Connectivity::Four);
        assert_eq!(out.labels(), &[0, 1, 2]);
    }

    #[test]
    fn connected_l_shape_is_kept() {
        let lm = map(2, 2, &[0, 1, 0, 0]);
        let out = enforce_connectivity(&lm, Connectivity::Four);
        assert_eq!(out.labels(), lm.labels());
    }

    #[test]
    fn diagonal_touch_depends_on_connectivity() {
        let lm = map(2, 2, &[0, 1, 1, 0]);
        let four = enforce_connectivity(&lm, Connectivity::Four);
        assert_eq!(four.max_label(), 3);
        let eight = enforce_connectivity(&lm, Connectivity::Eight);
        assert_eq!(eight.labels(), lm.labels());
    }

    #[test]
    fn enforcement_is_idempotent() {
        let lm = map(3, 2, &[0, 1, 0, 1, 1, 0]);
        let once = enforce_connectivity(&lm, Connectivity::Four);
        let twice = enforce_connectivity(&once, Connectivity::Four);
        assert_eq!(once, twice);
    }

    #[test]
    fn stats_on_single_region() {
        let img = RasterImage::new(
            2,
            2,
            1,
            ColorSpace::Gray,
            vec![0.0, 10.0, 20.0, 30.0],
        )
        .unwrap();
        let stats = region_stats(&img, &map(2, 2, &[0, 0, 0, 0])).unwrap();
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].area, 4);
        assert_eq!(stats[0].mean, vec![15.0]);
        assert_eq!(stats[0].saliency_sum, 0.0);
    }

    #[test]
    fn stats_on_halves() {
        let img = RasterImage::new(
            2,
            2,
            1,
            ColorSpace::Gray,
            vec![0.0, 10.0, 0.0, 10.0],
        )
        .unwrap();
        let stats = region_stats(&img, &map(2, 2, &[0, 1, 0, 1])).unwrap();
        assert_eq!(stats[0].mean, vec![0.0]);
        assert_eq!(stats[1].mean, vec![10.0]);
    }

    #[test]
    fn areas_partition_the_grid() {
        let img = RasterImage::constant(4, 3, ColorSpace::Gray, 1.0).unwrap();
        let lm = map(4, 3, &[0, 0, 1, 1, 2, 2, 1, 1, 2, 2, 3, 3]);
        let stats = region_stats(&img, &lm).unwrap();
        let total: usize = stats.iter().map(|s| s.area).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn stripes_adjacency() {
        let lm = map(3, 2, &[0, 1, 2, 0, 1, 2]);
        let g = build_adjacency(&lm, Connectivity::Four);
        assert_eq!(g.region_count, 3);
        let pairs: Vec<(u32, u32)> = g.edges.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn single_region_has_no_edges() {
        let g = build_adjacency(&map(2, 2, &[0, 0, 0, 0]), Connectivity::Four);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn four_edges_subset_of_eight() {
        let lm = map(3, 3, &[0, 0, 1, 0, 2, 1, 2, 2, 1]);
        let four: std::collections::BTreeSet<_> = build_adjacency(&lm, Connectivity::Four)
            .edges
            .iter()
            .map(|e| (e.a, e.b))
            .collect();
        let eight: std::collections::BTreeSet<_> = build_adjacency(&lm, Connectivity::Eight)
            .edges
            .iter()
            .map(|e| (e.a, e.b))
            .collect();
        assert!(four.is_subset(&eight));
    }
}
