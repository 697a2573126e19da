//! Constructors for the minimal-spectral-gap cubic and quartic families.
//!
//! Every graph is a path of blocks glued along cut vertices. A left end
//! block is written in local labels `1..=c` with `c` its cut vertex; right
//! ends are produced by reflecting the left pattern, never by a second
//! hand-written table. Vertices are numbered left to right by cell.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FamilyTag, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    CubicEndA,
    CubicEndAm,
    CubicEndB,
    CubicEndBm,
    CubicMiddle,
    M,
    D1,
    D2,
    D3,
    D4,
    D5,
    D1m,
    D2m,
    D3m,
    D4m,
    D5m,
}

/// Local pattern of a left end block: vertex labels `1..=size`, the cut vertex is `size`.
struct EndPattern {
    size: usize,
    edges: &'static [(usize, usize)],
    cells: &'static [&'static [usize]],
}

const CUBIC_END_A: EndPattern = EndPattern {
    size: 5,
    edges: &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)],
    cells: &[&[1, 2], &[3, 4], &[5]],
};

const CUBIC_END_B: EndPattern = EndPattern {
    size: 7,
    edges: &[
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 5),
        (4, 6),
        (5, 6),
        (5, 7),
        (6, 7),
    ],
    cells: &[&[1, 2], &[3, 4], &[5, 6], &[7]],
};

const PAT_D1: EndPattern = EndPattern {
    size: 6,
    edges: &[
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 4),
        (1, 5),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 6),
        (5, 6),
    ],
    cells: &[&[1, 2, 3], &[4, 5], &[6]],
};

const PAT_D2: EndPattern = EndPattern {
    size: 7,
    edges: &[
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 4),
        (1, 5),
        (3, 5),
        (2, 6),
        (4, 6),
        (5, 6),
        (5, 7),
        (6, 7),
    ],
    cells: &[&[1, 2, 3, 4], &[5, 6], &[7]],
};

const PAT_D3: EndPattern = EndPattern {
    size: 8,
    edges: &[
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (1, 5),
        (2, 5),
        (3, 4),
        (3, 6),
        (4, 7),
        (5, 6),
        (5, 7),
        (6, 7),
        (6, 8),
        (7, 8),
    ],
    cells: &[&[1, 2], &[3, 4], &[5], &[6, 7], &[8]],
};

const PAT_D4: EndPattern = EndPattern {
    size: 9,
    edges: &[
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (3, 4),
        (1, 5),
        (3, 5),
        (2, 6),
        (4, 6),
        (5, 7),
        (5, 8),
        (6, 7),
        (6, 8),
        (7, 8),
        (7, 9),
        (8, 9),
    ],
    cells: &[&[1, 2, 3, 4], &[5, 6], &[7, 8], &[9]],
};

const PAT_D5: EndPattern = EndPattern {
    size: 10,
    edges: &[
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 4),
        (1, 5),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 6),
        (5, 7),
        (6, 7),
        (6, 8),
        (6, 9),
        (7, 8),
        (7, 9),
        (8, 9),
        (8, 10),
        (9, 10),
    ],
    cells: &[&[1, 2, 3], &[4, 5], &[6, 7], &[8, 9], &[10]],
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    LeftEnd,
    Middle,
    RightEnd,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::CubicEndA => "CubicEndA",
            BlockKind::CubicEndAm => "CubicEndAm",
            BlockKind::CubicEndB => "CubicEndB",
            BlockKind::CubicEndBm => "CubicEndBm",
            BlockKind::CubicMiddle => "CubicMiddle",
            BlockKind::M => "M",
            BlockKind::D1 => "D1",
            BlockKind::D2 => "D2",
            BlockKind::D3 => "D3",
            BlockKind::D4 => "D4",
            BlockKind::D5 => "D5",
            BlockKind::D1m => "D1m",
            BlockKind::D2m => "D2m",
            BlockKind::D3m => "D3m",
            BlockKind::D4m => "D4m",
            BlockKind::D5m => "D5m",
        }
    }

    pub fn parse(s: &str) -> Result<BlockKind> {
        use BlockKind::*;
        let all = [
            CubicEndA,
            CubicEndAm,
            CubicEndB,
            CubicEndBm,
            CubicMiddle,
            M,
            D1,
            D2,
            D3,
            D4,
            D5,
            D1m,
            D2m,
            D3m,
            D4m,
            D5m,
        ];
        all.into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::BadBlocks(format!("unknown block kind {s:?}")))
    }

    /// The quartic end block `D_i`, `i` in 1..=5.
    pub fn quartic_end(i: usize) -> Option<BlockKind> {
        [BlockKind::D1, BlockKind::D2, BlockKind::D3, BlockKind::D4, BlockKind::D5]
            .get(i.wrapping_sub(1))
            .copied()
    }

    pub fn mirror(self) -> BlockKind {
        use BlockKind::*;
        match self {
            CubicEndA => CubicEndAm,
            CubicEndAm => CubicEndA,
            CubicEndB => CubicEndBm,
            CubicEndBm => CubicEndB,
            D1 => D1m,
            D2 => D2m,
            D3 => D3m,
            D4 => D4m,
            D5 => D5m,
            D1m => D1,
            D2m => D2,
            D3m => D3,
            D4m => D4,
            D5m => D5,
            CubicMiddle => CubicMiddle,
            M => M,
        }
    }

    pub fn is_quartic(self) -> bool {
        !matches!(
            self,
            BlockKind::CubicEndA
                | BlockKind::CubicEndAm
                | BlockKind::CubicEndB
                | BlockKind::CubicEndBm
                | BlockKind::CubicMiddle
        )
    }

    fn role(self) -> Role {
        use BlockKind::*;
        match self {
            CubicEndA | CubicEndB | D1 | D2 | D3 | D4 | D5 => Role::LeftEnd,
            CubicMiddle | M => Role::Middle,
            _ => Role::RightEnd,
        }
    }

    fn pattern(self) -> Option<&'static EndPattern> {
        use BlockKind::*;
        Some(match self {
            CubicEndA | CubicEndAm => &CUBIC_END_A,
            CubicEndB | CubicEndBm => &CUBIC_END_B,
            D1 | D1m => &PAT_D1,
            D2 | D2m => &PAT_D2,
            D3 | D3m => &PAT_D3,
            D4 | D4m => &PAT_D4,
            D5 | D5m => &PAT_D5,
            CubicMiddle | M => return None,
        })
    }

    /// Number of new vertices this block adds to the chain.
    pub fn added_vertices(self) -> usize {
        match (self, self.pattern()) {
            (BlockKind::CubicMiddle, _) => 4,
            (BlockKind::M, _) => 5,
            (k, Some(p)) if k.role() == Role::RightEnd && k.is_quartic() => p.size - 1,
            (_, Some(p)) => p.size,
            (_, None) => unreachable!(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Delta,
    Cubic,
    Gamma,
    Quartic,
}

impl Family {
    pub fn degree(self) -> usize {
        match self {
            Family::Delta | Family::Cubic => 3,
            Family::Gamma | Family::Quartic => 4,
        }
    }

    pub fn is_cubic(self) -> bool {
        self.degree() == 3
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Delta => "delta",
            Family::Cubic => "cubic",
            Family::Gamma => "gamma",
            Family::Quartic => "quartic",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s.to_ascii_lowercase().as_str() {
            "delta" => Ok(Family::Delta),
            "cubic" => Ok(Family::Cubic),
            "gamma" => Ok(Family::Gamma),
            "quartic" => Ok(Family::Quartic),
            _ => Err(Error::UnsupportedFamily(s.to_string())),
        }
    }

    /// Whether `n` is an admissible order for the family's single-order constructor.
    pub fn admits(self, n: usize) -> bool {
        match self {
            Family::Delta => n >= 10 && n % 4 == 2,
            Family::Cubic => n >= 10 && n.is_multiple_of(2),
            Family::Gamma => n >= 11 && n % 5 == 1,
            Family::Quartic => n >= 11,
        }
    }
}

/// Block sequence of a family member. `m` is the recurrence length: the
/// number of middle blocks, so main components run `a_0..=a_{m+1}` (cubic)
/// or `a_0..=a_m` over the cut vertices (quartic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub q: usize,
    pub r: Option<usize>,
    pub blocks: Vec<BlockKind>,
}

/// A constructed family graph with the bookkeeping read off its blocks.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub graph: Graph,
    /// Cells of the block-structure partition, left to right, 1-based vertices.
    pub cells: Vec<Vec<usize>>,
    /// Indices into `cells` of singleton cells holding a cut vertex.
    pub cut_cells: Vec<usize>,
    /// One representative vertex per main component `a_j`.
    pub main_vertices: Vec<usize>,
    /// Last vertex of each graph block (maximal 2-connected piece or bridge), in order.
    pub block_ends: Vec<usize>,
}

impl FamilyDescriptor {
    pub fn delta(n: usize) -> Result<FamilyDescriptor> {
        if n < 10 || n % 4 != 2 {
            return Err(Error::BadOrder {
                family: "delta",
                n,
                reason: "need n >= 10 and n = 2 (mod 4)",
            });
        }
        let m = (n - 10) / 4;
        Ok(Self::cubic_chain(Family::Delta, n, m, BlockKind::CubicEndAm))
    }

    pub fn min_cubic(n: usize) -> Result<FamilyDescriptor> {
        if n < 10 || !n.is_multiple_of(2) {
            return Err(Error::BadOrder {
                family: "cubic",
                n,
                reason: "need even n >= 10",
            });
        }
        if n % 4 == 2 {
            return Self::delta(n);
        }
        let m = (n - 12) / 4;
        Ok(Self::cubic_chain(Family::Cubic, n, m, BlockKind::CubicEndBm))
    }

    fn cubic_chain(family: Family, n: usize, m: usize, right: BlockKind) -> FamilyDescriptor {
        let mut blocks = vec![BlockKind::CubicEndA];
        blocks.extend(std::iter::repeat_n(BlockKind::CubicMiddle, m));
        blocks.push(right);
        FamilyDescriptor {
            family,
            n,
            m,
            q: m,
            r: None,
            blocks,
        }
    }

    pub fn gamma(n: usize) -> Result<FamilyDescriptor> {
        if n < 11 || n % 5 != 1 {
            return Err(Error::BadOrder {
                family: "gamma",
                n,
                reason: "need n >= 11 and n = 1 (mod 5)",
            });
        }
        let mut fd = Self::quartic(BlockKind::D1, (n - 11) / 5, BlockKind::D1m)?;
        fd.family = Family::Gamma;
        Ok(fd)
    }

    pub fn quartic(left: BlockKind, q: usize, right: BlockKind) -> Result<FamilyDescriptor> {
        let left_ok = left.is_quartic() && left.role() == Role::LeftEnd;
        let right_ok = right.is_quartic() && right.role() == Role::RightEnd;
        if !left_ok || !right_ok {
            return Err(Error::BadBlocks(format!(
                "need D1..D5 on the left and D1m..D5m on the right, got {} and {}",
                left.name(),
                right.name()
            )));
        }
        let mut blocks = vec![left];
        blocks.extend(std::iter::repeat_n(BlockKind::M, q));
        blocks.push(right);
        let n = blocks.iter().map(|b| b.added_vertices()).sum::<usize>();
        Ok(FamilyDescriptor {
            family: Family::Quartic,
            n,
            m: q,
            q,
            r: Some(n - 11 - 5 * q),
            blocks,
        })
    }

    /// The member of the quartic minimal-gap family of order `n`.
    pub fn canonical_quartic(n: usize) -> Result<FamilyDescriptor> {
        if n < 11 {
            return Err(Error::BadOrder {
                family: "quartic",
                n,
                reason: "need n >= 11",
            });
        }
        let (q, r) = ((n - 11) / 5, (n - 11) % 5);
        let (l, rt) = match r {
            0 => (BlockKind::D1, BlockKind::D1m),
            1 => (BlockKind::D1, BlockKind::D2m),
            2 => (BlockKind::D2, BlockKind::D2m),
            3 => (BlockKind::D2, BlockKind::D3m),
            _ => (BlockKind::D1, BlockKind::D5m),
        };
        let mut fd = Self::quartic(l, q, rt)?;
        if r == 0 {
            fd.family = Family::Gamma;
        }
        Ok(fd)
    }

    /// Descriptor for `family` at order `n`; `quartic` means the canonical member.
    pub fn for_family(family: Family, n: usize) -> Result<FamilyDescriptor> {
        match family {
            Family::Delta => Self::delta(n),
            Family::Cubic => Self::min_cubic(n),
            Family::Gamma => Self::gamma(n),
            Family::Quartic => Self::canonical_quartic(n),
        }
    }

    pub fn tag(&self) -> FamilyTag {
        match self.family {
            Family::Delta => FamilyTag::Delta,
            Family::Cubic => FamilyTag::Cubic0mod4,
            Family::Gamma => FamilyTag::Gamma,
            Family::Quartic => FamilyTag::QuarticCustom,
        }
    }

    /// Whether the reversal `i -> n + 1 - i` is an automorphism by construction.
    pub fn is_mirror_symmetric(&self) -> bool {
        let first = self.blocks[0];
        let last = *self.blocks.last().expect("descriptor has end blocks");
        first.mirror() == last
    }

    pub fn assemble(&self) -> Assembly {
        assemble(self)
    }

    pub fn build(&self) -> Graph {
        self.assemble().graph
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialization cannot fail")
    }
}

fn assemble(fd: &FamilyDescriptor) -> Assembly {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut cut_cells = Vec::new();
    let mut main_vertices = Vec::new();
    let mut block_ends = Vec::new();
    let mut tail = 0usize;

    for &kind in &fd.blocks {
        match (kind.role(), kind) {
            (Role::LeftEnd, _) => {
                let p = kind.pattern().expect("end block has a pattern");
                edges.extend_from_slice(p.edges);
                for c in p.cells {
                    cells.push(c.to_vec());
                }
                cut_cells.push(cells.len() - 1);
                main_vertices.push(if kind.is_quartic() {
                    p.size
                } else {
                    p.cells[p.cells.len() - 2][0]
                });
                tail = p.size;
                block_ends.push(tail);
            }
            (Role::Middle, BlockKind::CubicMiddle) => {
                let (r, s1, s2, t) = (tail + 1, tail + 2, tail + 3, tail + 4);
                edges.extend([(tail, r), (r, s1), (r, s2), (s1, s2), (s1, t), (s2, t)]);
                cells.push(vec![r]);
                cut_cells.push(cells.len() - 1);
                cells.push(vec![s1, s2]);
                cells.push(vec![t]);
                cut_cells.push(cells.len() - 1);
                main_vertices.push(s1);
                block_ends.extend([r, t]);
                tail = t;
            }
            (Role::Middle, _) => {
                let (s1, s2, t1, t2, u) = (tail + 1, tail + 2, tail + 3, tail + 4, tail + 5);
                edges.extend([
                    (tail, s1),
                    (tail, s2),
                    (s1, s2),
                    (s1, t1),
                    (s1, t2),
                    (s2, t1),
                    (s2, t2),
                    (t1, t2),
                    (t1, u),
                    (t2, u),
                ]);
                cells.extend([vec![s1, s2], vec![t1, t2], vec![u]]);
                cut_cells.push(cells.len() - 1);
                main_vertices.push(u);
                block_ends.push(u);
                tail = u;
            }
            (Role::RightEnd, _) => {
                let p = kind.pattern().expect("end block has a pattern");
                // Quartic right ends reuse the previous cut vertex as their own;
                // cubic ones hang off it by a bridge.
                let (base, shared) = if kind.is_quartic() {
                    (tail, true)
                } else {
                    edges.push((tail, tail + 1));
                    block_ends.push(tail + 1);
                    (tail + 1, false)
                };
                let map = |l: usize| base + p.size - l;
                edges.extend(p.edges.iter().map(|&(u, v)| (map(u), map(v))));
                let skip = usize::from(shared);
                for c in p.cells.iter().rev().skip(skip) {
                    let mut mc: Vec<usize> = c.iter().map(|&l| map(l)).collect();
                    mc.sort_unstable();
                    cells.push(mc);
                }
                if !shared {
                    cut_cells.push(cells.len() - p.cells.len());
                    main_vertices.push(map(p.cells[p.cells.len() - 2][0]));
                }
                tail = base + p.size - 1;
                block_ends.push(tail);
            }
        }
    }
    debug_assert_eq!(tail, fd.n);
    let graph = Graph::new(fd.n, &edges)
        .expect("block tables are valid")
        .with_tag(fd.tag());
    Assembly {
        graph,
        cells,
        cut_cells,
        main_vertices,
        block_ends,
    }
}

pub fn build_delta(n: usize) -> Result<Graph> {
    Ok(FamilyDescriptor::delta(n)?.build())
}

pub fn build_min_cubic(n: usize) -> Result<Graph> {
    Ok(FamilyDescriptor::min_cubic(n)?.build())
}

pub fn build_gamma(n: usize) -> Result<Graph> {
    Ok(FamilyDescriptor::gamma(n)?.build())
}

pub fn build_quartic(left: BlockKind, q: usize, right: BlockKind) -> Result<Graph> {
    Ok(FamilyDescriptor::quartic(left, q, right)?.build())
}

pub fn canonical_quartic(n: usize) -> Result<Graph> {
    Ok(FamilyDescriptor::canonical_quartic(n)?.build())
}

/// Vertex reversal `i -> n + 1 - i` applied to a graph.
pub fn reversed(g: &Graph) -> Graph {
    let n = g.n();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (n + 1 - u, n + 1 - v))
        .collect();
    Graph::new(n, &edges).expect("reversal preserves validity")
}
