use super::rational::Rational;

/// Brings `mat` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(mat: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = mat.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = mat[r].clone();
        for (i, row) in mat.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &(&f * y);
            }
        }
        pivots.push(c);
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    mat.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&q(&[&[1, -1, 0], &[0, 1, -1], &[1, 0, -1]])), 2);
        assert_eq!(rank(&q(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&q(&[&[0, 0]])), 0);
    }

    #[test]
    fn rref_pivots() {
        let mut m = q(&[&[0, 2, 4], &[0, 1, 3]]);
        assert_eq!(rref(&mut m), vec![1, 2]);
        assert_eq!(m, q(&[&[0, 1, 0], &[0, 0, 1]]));
    }
}
