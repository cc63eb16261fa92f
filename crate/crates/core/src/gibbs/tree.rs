//! The semi-infinite Cayley tree truncated at a finite depth, with the
//! level sets W_m, successor lists S(x), and the edge set L_n.

use serde::Serialize;

/// Rooted tree of order k truncated at depth `levels`: the root and every
/// interior vertex have exactly k successors, so |W_m| = k^m. Vertices are
/// indexed breadth-first with the root at 0, which makes V_n a prefix of
/// V_{n+1} and configuration concatenation a plain append.
#[derive(Debug, Clone, Serialize)]
pub struct CayleyTree {
    pub order: u32,
    pub levels: u32,
    level_start: Vec<usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl CayleyTree {
    pub fn new(order: u32, levels: u32) -> Self {
        assert!(order >= 1 && levels >= 1);
        let k = order as usize;
        let mut level_start = vec![0usize];
        let mut size = 0usize;
        let mut width = 1usize;
        for _ in 0..=levels {
            size += width;
            level_start.push(size);
            width *= k;
        }
        let mut parent = vec![None; size];
        let mut children = vec![Vec::new(); size];
        for v in 0..size {
            let level = Self::level_from_starts(&level_start, v);
            if level < levels as usize {
                let first_child = level_start[level + 1] + (v - level_start[level]) * k;
                for c in first_child..first_child + k {
                    parent[c] = Some(v);
                    children[v].push(c);
                }
            }
        }
        CayleyTree {
            order,
            levels,
            level_start,
            parent,
            children,
        }
    }

    fn level_from_starts(starts: &[usize], v: usize) -> usize {
        starts.partition_point(|&s| s <= v) - 1
    }

    pub fn root(&self) -> usize {
        0
    }

    /// |V_n| for n <= levels.
    pub fn vertex_count_at(&self, n: u32) -> usize {
        self.level_start[n as usize + 1]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count_at(self.levels)
    }

    /// |W_m| = k^m.
    pub fn level_size(&self, m: u32) -> usize {
        self.level_start[m as usize + 1] - self.level_start[m as usize]
    }

    /// Index range of W_m.
    pub fn level_vertices(&self, m: u32) -> std::ops::Range<usize> {
        self.level_start[m as usize]..self.level_start[m as usize + 1]
    }

    pub fn level_of(&self, v: usize) -> u32 {
        Self::level_from_starts(&self.level_start, v) as u32
    }

    /// Direct successors S(x).
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Edges of L_n as (parent, child) pairs: every vertex of V_n except the
    /// root contributes its parent edge.
    pub fn edges_up_to(&self, n: u32) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.vertex_count_at(n)).map(move |v| (self.parent[v].unwrap(), v))
    }

    pub fn edge_count_at(&self, n: u32) -> usize {
        self.vertex_count_at(n) - 1
    }
}

/// Spin values in 1..=q on a breadth-first prefix of the tree (V_n or,
/// when offset, W_n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Configuration {
    pub spins: Vec<u8>,
}

impl Configuration {
    pub fn new(spins: Vec<u8>) -> Self {
        Configuration { spins }
    }

    /// Decodes the rank-th configuration (base-q counter, least significant
    /// digit at vertex 0) on `vertices` vertices.
    pub fn from_rank(mut rank: u128, vertices: usize, q: u8) -> Self {
        let mut spins = Vec::with_capacity(vertices);
        for _ in 0..vertices {
            spins.push((rank % q as u128) as u8 + 1);
            rank /= q as u128;
        }
        Configuration { spins }
    }

    pub fn rank(&self, q: u8) -> u128 {
        let mut rank = 0u128;
        for &s in self.spins.iter().rev() {
            rank = rank * q as u128 + (s - 1) as u128;
        }
        rank
    }

    /// Concatenation sigma_{n-1} v omega: spins on V_{n-1} followed by spins
    /// on W_n, which is exactly an append in breadth-first indexing.
    pub fn concat(&self, omega: &Configuration) -> Configuration {
        let mut spins = self.spins.clone();
        spins.extend_from_slice(&omega.spins);
        Configuration { spins }
    }

    pub fn spin(&self, vertex: usize) -> u8 {
        self.spins[vertex]
    }
}

/// Total count q^vertices, for enumeration loops.
pub fn config_count(vertices: usize, q: u8) -> u128 {
    (q as u128).pow(vertices as u32)
}
