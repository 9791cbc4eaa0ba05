//! Sparse LU factorization of a simplex basis with Forrest-Tomlin updates.
//!
//! Basis columns are addressed by position `0..m`, matrix rows by `0..m`.
//! Pivots are chosen singletons first and by Markowitz count with threshold
//! partial pivoting for whatever remains.

const ZERO: f64 = 1e-14;
const SINGULAR: f64 = 1e-11;
/// Relative magnitude a pivot must have within its column.
const THRESHOLD: f64 = 0.1;

/// Sparse column: `(row, value)` pairs.
pub(crate) type Column = Vec<(usize, f64)>;

/// `b[target] -= sum(mult * b[row])`, applied between `L` and `U`.
#[derive(Debug, Clone)]
struct RowEta {
    target: usize,
    entries: Vec<(usize, f64)>,
}

/// `B = L^-1 ... U` kept in row form: every matrix row pivots on one basis
/// position, and `order` lists the rows so that each row's off-diagonal
/// entries sit at positions pivoted by later rows.
#[derive(Debug, Clone, Default)]
pub(crate) struct Factor {
    /// Elimination steps: pivot row and the multipliers of the rows below.
    l: Vec<(usize, Vec<(usize, f64)>)>,
    etas: Vec<RowEta>,
    order: Vec<usize>,
    /// Off-diagonal entries of each row, keyed by position.
    urow: Vec<Vec<(usize, f64)>>,
    /// Rows that may hold an entry at each position.
    ucol: Vec<Vec<usize>>,
    diag: Vec<f64>,
    pos_of_row: Vec<usize>,
    row_of_pos: Vec<usize>,
    /// Entering column after `L` and the row etas, kept for `update`.
    spike: Vec<f64>,
    work: Vec<f64>,
}

/// Positions and rows left without a pivot by a singular basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Singular {
    pub positions: Vec<usize>,
    pub rows: Vec<usize>,
}

impl Factor {
    pub fn factorize(m: usize, columns: &[&[(usize, f64)]]) -> Result<Self, Singular> {
        debug_assert_eq!(columns.len(), m);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        let mut cols: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (p, col) in columns.iter().enumerate() {
            for &(i, a) in col.iter() {
                if a.abs() > ZERO {
                    rows[i].push((p, a));
                    cols[p].push(i);
                }
            }
        }
        let mut row_done = vec![false; m];
        let mut col_done = vec![false; m];
        let mut f = Factor {
            urow: vec![Vec::new(); m],
            ucol: vec![Vec::new(); m],
            diag: vec![0.0; m],
            pos_of_row: vec![usize::MAX; m],
            row_of_pos: vec![usize::MAX; m],
            spike: vec![0.0; m],
            work: vec![0.0; m],
            ..Default::default()
        };
        f.order.reserve(m);
        let mut col_queue: Vec<usize> = (0..m).filter(|&p| cols[p].len() == 1).collect();
        let mut row_queue: Vec<usize> = (0..m).filter(|&i| rows[i].len() == 1).collect();
        let mut work = vec![usize::MAX; m];
        // columns by active count; entries go stale and are checked on use
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
        for (p, col) in cols.iter().enumerate() {
            buckets[col.len()].push(p);
        }

        while f.order.len() < m {
            let mut chosen: Option<(usize, usize)> = None;
            while let Some(p) = col_queue.pop() {
                if !col_done[p] && cols[p].len() == 1 {
                    let r = cols[p][0];
                    let a = rows[r].iter().find(|e| e.0 == p).map_or(0.0, |e| e.1);
                    if a.abs() > SINGULAR {
                        chosen = Some((r, p));
                        break;
                    }
                }
            }
            if chosen.is_none() {
                while let Some(r) = row_queue.pop() {
                    if !row_done[r] && rows[r].len() == 1 && rows[r][0].1.abs() > SINGULAR {
                        chosen = Some((r, rows[r][0].0));
                        break;
                    }
                }
            }
            if chosen.is_none() {
                chosen = markowitz(&rows, &cols, &col_done, &mut buckets);
            }
            let Some((r, p)) = chosen else { break };

            let mut u_row = std::mem::take(&mut rows[r]);
            let at = u_row.iter().position(|e| e.0 == p).unwrap();
            let pivot = u_row.swap_remove(at).1;
            for &(j, _) in &u_row {
                cols[j].retain(|&i| i != r);
                if cols[j].len() == 1 {
                    col_queue.push(j);
                }
                buckets[cols[j].len()].push(j);
            }
            let mut l_col = Vec::new();
            let col_rows = std::mem::take(&mut cols[p]);
            for &i in &col_rows {
                if i == r {
                    continue;
                }
                let pos_in_i = rows[i].iter().position(|e| e.0 == p).unwrap();
                let mult = rows[i][pos_in_i].1 / pivot;
                rows[i].swap_remove(pos_in_i);
                if mult.abs() > ZERO {
                    l_col.push((i, mult));
                    for (k, &(j, _)) in rows[i].iter().enumerate() {
                        work[j] = k;
                    }
                    for &(j, a) in &u_row {
                        if work[j] != usize::MAX {
                            rows[i][work[j]].1 -= mult * a;
                        } else {
                            rows[i].push((j, -mult * a));
                            cols[j].push(i);
                            buckets[cols[j].len()].push(j);
                        }
                    }
                    for &(j, _) in rows[i].iter() {
                        work[j] = usize::MAX;
                    }
                }
                if rows[i].len() == 1 {
                    row_queue.push(i);
                }
            }
            row_done[r] = true;
            col_done[p] = true;
            if !l_col.is_empty() {
                f.l.push((r, l_col));
            }
            for &(j, _) in &u_row {
                f.ucol[j].push(r);
            }
            f.urow[r] = u_row;
            f.diag[r] = pivot;
            f.pos_of_row[r] = p;
            f.row_of_pos[p] = r;
            f.order.push(r);
        }
        if f.order.len() < m {
            return Err(Singular {
                positions: (0..m).filter(|&p| !col_done[p]).collect(),
                rows: (0..m).filter(|&i| !row_done[i]).collect(),
            });
        }
        Ok(f)
    }

    pub fn updates(&self) -> usize {
        self.etas.len()
    }

    fn lower(&self, b: &mut [f64]) {
        for (r, col) in &self.l {
            let v = b[*r];
            if v != 0.0 {
                for &(i, l) in col {
                    b[i] -= l * v;
                }
            }
        }
        for eta in &self.etas {
            let mut v = b[eta.target];
            for &(i, mult) in &eta.entries {
                v -= mult * b[i];
            }
            b[eta.target] = v;
        }
    }

    fn upper(&self, b: &[f64], z: &mut [f64]) {
        for &i in self.order.iter().rev() {
            let mut v = b[i];
            for &(j, a) in &self.urow[i] {
                v -= a * z[j];
            }
            z[self.pos_of_row[i]] = v / self.diag[i];
        }
    }

    /// Solves `B z = b` in place: `b` indexed by row on entry, by position
    /// on exit.
    pub fn ftran(&mut self, b: &mut Vec<f64>) {
        self.lower(b);
        let mut z = std::mem::take(&mut self.work);
        self.upper(b, &mut z);
        self.work = std::mem::replace(b, z);
    }

    /// `ftran` of a column about to enter the basis; `update` relies on it.
    pub fn ftran_entering(&mut self, b: &mut Vec<f64>) {
        self.lower(b);
        let mut z = std::mem::take(&mut self.work);
        self.upper(b, &mut z);
        let lowered = std::mem::replace(b, z);
        self.work = std::mem::replace(&mut self.spike, lowered);
    }

    /// Solves `B^T w = c` in place: `c` indexed by position on entry, by row
    /// on exit.
    pub fn btran(&mut self, c: &mut Vec<f64>) {
        let mut w = std::mem::take(&mut self.work);
        for &i in &self.order {
            let v = c[self.pos_of_row[i]] / self.diag[i];
            w[i] = v;
            if v != 0.0 {
                for &(j, a) in &self.urow[i] {
                    c[j] -= a * v;
                }
            }
        }
        for eta in self.etas.iter().rev() {
            let v = w[eta.target];
            if v != 0.0 {
                for &(i, mult) in &eta.entries {
                    w[i] -= mult * v;
                }
            }
        }
        for (r, col) in self.l.iter().rev() {
            let mut v = w[*r];
            for &(i, l) in col {
                v -= l * w[i];
            }
            w[*r] = v;
        }
        self.work = std::mem::replace(c, w);
    }

    /// Replaces the column at `pos` by the one last passed to
    /// `ftran_entering`. Returns false when the new pivot is too small to
    /// trust, after which the factorization must be rebuilt.
    pub fn update(&mut self, pos: usize) -> bool {
        let target = self.row_of_pos[pos];
        for i in std::mem::take(&mut self.ucol[pos]) {
            self.urow[i].retain(|e| e.0 != pos);
        }
        // eliminate the old row against the rows pivoted after it
        let w = &mut self.work;
        w.fill(0.0);
        for &(j, a) in &self.urow[target] {
            w[j] = a;
        }
        self.urow[target].clear();
        let at = self.order.iter().position(|&i| i == target).unwrap();
        let mut entries = Vec::new();
        let mut diag = self.spike[target];
        for &i in &self.order[at + 1..] {
            let p = self.pos_of_row[i];
            let v = w[p];
            if v == 0.0 {
                continue;
            }
            w[p] = 0.0;
            let mult = v / self.diag[i];
            if mult.abs() <= ZERO {
                continue;
            }
            for &(j, a) in &self.urow[i] {
                w[j] -= mult * a;
            }
            diag -= mult * self.spike[i];
            entries.push((i, mult));
        }
        self.order.remove(at);
        self.order.push(target);
        self.etas.push(RowEta { target, entries });
        for (i, &v) in self.spike.iter().enumerate() {
            if i != target && v.abs() > ZERO {
                self.urow[i].push((pos, v));
                self.ucol[pos].push(i);
            }
        }
        self.diag[target] = diag;
        diag.abs() > SINGULAR
    }
}

/// Columns examined once a pivot candidate is known.
const SEARCH_COLUMNS: usize = 4;

/// Low Markowitz cost pivot subject to the threshold test, searching the
/// sparsest columns first.
#[allow(clippy::needless_range_loop)]
fn markowitz(
    rows: &[Vec<(usize, f64)>],
    cols: &[Vec<usize>],
    col_done: &[bool],
    buckets: &mut [Vec<usize>],
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, f64, usize, usize)> = None;
    let mut examined = 0;
    for count in 1..buckets.len() {
        if best.is_some_and(|b| b.0 <= (count - 1) * (count - 1)) {
            break;
        }
        let mut k = 0;
        while k < buckets[count].len() {
            let p = buckets[count][k];
            if col_done[p] || cols[p].len() != count {
                buckets[count].swap_remove(k);
                continue;
            }
            k += 1;
            let col = &cols[p];
            let value = |i: usize| rows[i].iter().find(|e| e.0 == p).map_or(0.0, |e| e.1);
            let max = col.iter().map(|&i| value(i).abs()).fold(0.0, f64::max);
            if max <= SINGULAR {
                continue;
            }
            for &i in col {
                let a = value(i).abs();
                if a < THRESHOLD * max || a <= SINGULAR {
                    continue;
                }
                let cost = (rows[i].len() - 1) * (count - 1);
                if best.is_none_or(|(c, v, _, _)| cost < c || (cost == c && a > v)) {
                    best = Some((cost, a, i, p));
                }
            }
            if best.is_some() {
                examined += 1;
                if examined >= SEARCH_COLUMNS {
                    return best.map(|(_, _, i, p)| (i, p));
                }
            }
        }
    }
    best.map(|(_, _, i, p)| (i, p))
}
