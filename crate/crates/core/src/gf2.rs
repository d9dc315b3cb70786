//! Rank of sparse matrices over GF(2).
//!
//! Boundary matrices of grid complexes are very sparse and highly
//! structured, so most of the rank falls out of singleton elimination: a row
//! met by a single column, or a column with a single entry, is a pivot that
//! can be removed without any fill-in. What survives is reduced densely on
//! packed bit rows when small enough, and by sparse column reduction
//! otherwise.

use std::collections::HashMap;

/// A GF(2) matrix given by its columns, each a sorted list of row indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub cols: Vec<Vec<u32>>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, mut cols: Vec<Vec<u32>>) -> Self {
        for c in &mut cols {
            c.sort_unstable();
            debug_assert!(c.windows(2).all(|w| w[0] < w[1]), "duplicate entry in column");
            debug_assert!(c.last().map_or(true, |&r| (r as usize) < nrows));
        }
        SparseMatrix { nrows, cols }
    }

    pub fn identity(k: usize) -> Self {
        SparseMatrix { nrows: k, cols: (0..k as u32).map(|i| vec![i]).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn rank(&self) -> usize {
        gf2_rank(self)
    }
}

/// Largest surviving core, in bits, that is reduced densely.
const DENSE_LIMIT_BITS: usize = 1 << 31;

pub fn gf2_rank(m: &SparseMatrix) -> usize {
    let mut cols: Vec<Vec<u32>> = m.cols.iter().filter(|c| !c.is_empty()).cloned().collect();
    if cols.is_empty() {
        return 0;
    }
    let (rank, core) = peel_singletons(m.nrows, &mut cols);
    if core.is_empty() {
        return rank;
    }
    // renumber surviving rows densely
    let mut remap: HashMap<u32, u32> = HashMap::new();
    for c in &core {
        for &r in c {
            let next = remap.len() as u32;
            remap.entry(r).or_insert(next);
        }
    }
    let nrows = remap.len();
    let core: Vec<Vec<u32>> = core
        .into_iter()
        .map(|c| {
            let mut v: Vec<u32> = c.iter().map(|r| remap[r]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    if nrows.saturating_mul(core.len().min(nrows)) <= DENSE_LIMIT_BITS {
        rank + dense_rank(nrows, &core)
    } else {
        rank + sparse_reduce_rank(&core)
    }
}

/// Removes pivots that cause no fill-in. Returns the rank found so far and
/// the remaining nonzero columns.
fn peel_singletons(nrows: usize, cols: &mut [Vec<u32>]) -> (usize, Vec<Vec<u32>>) {
    let ncols = cols.len();
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &r in c {
            row_cols[r as usize].push(j as u32);
        }
    }
    let mut row_count: Vec<u32> = row_cols.iter().map(|v| v.len() as u32).collect();
    let mut col_alive = vec![true; ncols];
    let mut row_alive = vec![true; nrows];
    let mut rank = 0;

    let mut row_queue: Vec<u32> = (0..nrows as u32).filter(|&r| row_count[r as usize] == 1).collect();
    let mut col_queue: Vec<u32> = (0..ncols as u32).filter(|&j| cols[j as usize].len() == 1).collect();

    loop {
        if let Some(r) = row_queue.pop() {
            let r = r as usize;
            if !row_alive[r] || row_count[r] != 1 {
                continue;
            }
            // the single live column through r is independent of the rest
            let j = row_cols[r]
                .iter()
                .map(|&j| j as usize)
                .find(|&j| col_alive[j] && cols[j].binary_search(&(r as u32)).is_ok())
                .expect("row count out of sync");
            col_alive[j] = false;
            rank += 1;
            for &rr in &cols[j] {
                let rr = rr as usize;
                row_count[rr] -= 1;
                if row_count[rr] == 1 && row_alive[rr] {
                    row_queue.push(rr as u32);
                }
            }
            row_alive[r] = false;
            cols[j].clear();
            continue;
        }
        if let Some(j) = col_queue.pop() {
            let j = j as usize;
            if !col_alive[j] || cols[j].len() != 1 {
                continue;
            }
            // column with a single entry r: clear r from every other column
            let r = cols[j][0] as usize;
            col_alive[j] = false;
            rank += 1;
            row_alive[r] = false;
            for &k in &row_cols[r] {
                let k = k as usize;
                if k == j || !col_alive[k] {
                    continue;
                }
                if let Ok(pos) = cols[k].binary_search(&(r as u32)) {
                    cols[k].remove(pos);
                    match cols[k].len() {
                        0 => col_alive[k] = false,
                        1 => col_queue.push(k as u32),
                        _ => {}
                    }
                }
            }
            row_count[r] = 0;
            cols[j].clear();
            continue;
        }
        break;
    }
    let core = cols
        .iter_mut()
        .zip(&col_alive)
        .filter(|(c, &alive)| alive && !c.is_empty())
        .map(|(c, _)| std::mem::take(c))
        .collect();
    (rank, core)
}

/// Gaussian elimination on bit-packed columns.
fn dense_rank(nrows: usize, cols: &[Vec<u32>]) -> usize {
    let words = nrows.div_ceil(64);
    // pivots[row] = index into `basis` of the vector whose lowest set bit is row
    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; nrows];
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut v = vec![0u64; words];
    for c in cols {
        v.iter_mut().for_each(|w| *w = 0);
        for &r in c {
            v[r as usize / 64] |= 1 << (r % 64);
        }
        let mut start = 0;
        loop {
            let Some(low) = lowest_bit(&v, start) else { break };
            let p = pivot_of_row[low];
            if p == u32::MAX {
                pivot_of_row[low] = basis.len() as u32;
                basis.push(v.clone());
                break;
            }
            let b = &basis[p as usize];
            let w0 = low / 64;
            for (x, y) in v[w0..].iter_mut().zip(&b[w0..]) {
                *x ^= y;
            }
            start = w0;
        }
    }
    basis.len()
}

fn lowest_bit(v: &[u64], start_word: usize) -> Option<usize> {
    v[start_word..].iter().position(|&w| w != 0).map(|i| {
        let w = start_word + i;
        w * 64 + v[w].trailing_zeros() as usize
    })
}

/// Column reduction keyed by the lowest row index, on sorted sparse vectors.
fn sparse_reduce_rank(cols: &[Vec<u32>]) -> usize {
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| cols[j].len());
    let mut pivots: HashMap<u32, Vec<u32>> = HashMap::new();
    let mut scratch = Vec::new();
    for j in order {
        let mut v = cols[j].clone();
        while let Some(&low) = v.first() {
            match pivots.get(&low) {
                Some(p) => {
                    symmetric_difference(&v, p, &mut scratch);
                    std::mem::swap(&mut v, &mut scratch);
                }
                None => {
                    pivots.insert(low, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn symmetric_difference(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}
