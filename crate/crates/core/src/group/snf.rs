//! Smith normal form over the integers, tracking the column transform.

/// Reduces `a` (rows x cols) to diagonal form `U a V = D` with
/// `d_1 | d_2 | ...` and non-negative diagonal. Returns the diagonal (length
/// `min(rows, cols)`) and the unimodular column transform `V`.
pub fn smith_normal_form(mut a: Vec<Vec<i128>>) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut v: Vec<Vec<i128>> =
        (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend(std::iter::repeat_n(0, rows.min(cols) - t));
                return (diag, v);
            };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        diag.push(a[t][t]);
    }
    (diag, v)
}

fn swap_cols(m: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        let n = b[0].len();
        a.iter()
            .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, brow)| x * brow[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn diagonal_of_known_matrices() {
        let (d, _) = smith_normal_form(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(d, vec![2, 6, 12]);
        let (d, _) = smith_normal_form(vec![vec![4, 0], vec![0, 6]]);
        assert_eq!(d, vec![2, 12]);
        let (d, _) = smith_normal_form(vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(d, vec![0, 0]);
    }

    #[test]
    fn column_transform_preserves_row_lattice() {
        // Z4+Z8 modulo <(1,2)>: relations (4,0), (0,8), (1,2)
        let a = vec![vec![4, 0], vec![0, 8], vec![1, 2]];
        let (d, v) = smith_normal_form(a.clone());
        assert_eq!(d, vec![1, 8]);
        // every relation maps into the lattice spanned by diag(d)
        for row in mul(&a, &v) {
            for (x, &dj) in row.iter().zip(&d) {
                assert_eq!(x % dj, 0);
            }
        }
        // V is unimodular
        let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
        assert_eq!(det.abs(), 1);
    }
}
