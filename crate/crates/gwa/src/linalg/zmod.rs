//! Linear algebra over `Z/mZ` built on the Howell normal form.
//!
//! Matrices are plain row vectors of residues in `[0, m)`. The Howell form of
//! a row span is canonical: two generating sets span the same submodule of
//! `(Z/mZ)^n` if and only if their Howell forms are identical. It also has the
//! property that every vector of the span whose first `j` entries vanish is a
//! combination of the rows whose first `j` entries vanish, which is what makes
//! kernel extraction from `[A^T | I]` complete over non-field moduli.

pub type Row = Vec<u64>;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_signed(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Extended gcd over the integers: returns `(g, s, t)` with `s*a + t*b = g`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd((a % m) as i128, m as i128);
    (g == 1).then(|| reduce_signed(s, m))
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A unit `w` with `w * a = gcd(a, m) (mod m)`. `a` must be nonzero mod `m`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let (a1, m1) = (a / g, m / g);
    let w0 = inv_mod(a1 % m1, m1).expect("a/g is coprime to m/g");
    let mut w = w0;
    // Some lift of w0 along m1 is a unit mod m.
    while gcd(w, m) != 1 {
        w += m1;
    }
    w % m
}

fn row_axpy(target: &mut [u64], coef: u64, src: &[u64], m: u64) {
    if coef == 0 {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t = add_mod(*t, mul_mod(coef, *s, m), m);
    }
}

fn row_scale(row: &mut [u64], coef: u64, m: u64) {
    for v in row.iter_mut() {
        *v = mul_mod(*v, coef, m);
    }
}

/// Howell normal form of the row span of `rows` (each of length `ncols`).
///
/// Zero rows are dropped; the result is in echelon form with pivots that are
/// divisors of `m`, entries above each pivot reduced into `[0, pivot)`, and
/// the Howell property.
pub fn howell_form(rows: &[Row], ncols: usize, m: u64) -> Vec<Row> {
    let mut a: Vec<Row> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), ncols);
            r.iter().map(|v| v % m).collect()
        })
        .filter(|r: &Row| r.iter().any(|&v| v != 0))
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        if r >= a.len() {
            break;
        }
        let mut i = r + 1;
        while i < a.len() {
            if a[i][c] == 0 {
                i += 1;
                continue;
            }
            if a[r][c] == 0 {
                a.swap(r, i);
                i += 1;
                continue;
            }
            let x = a[r][c] as i128;
            let y = a[i][c] as i128;
            let (g, s, t) = xgcd(x, y);
            let (u, v) = (x / g, y / g);
            let (s, t) = (reduce_signed(s, m), reduce_signed(t, m));
            let (u, nv) = (reduce_signed(u, m), reduce_signed(-v, m));
            let new_r: Row = a[r]
                .iter()
                .zip(&a[i])
                .map(|(&p, &q)| add_mod(mul_mod(s, p, m), mul_mod(t, q, m), m))
                .collect();
            let new_i: Row = a[r]
                .iter()
                .zip(&a[i])
                .map(|(&p, &q)| add_mod(mul_mod(nv, p, m), mul_mod(u, q, m), m))
                .collect();
            a[r] = new_r;
            a[i] = new_i;
            i += 1;
        }
        if a[r][c] == 0 {
            continue;
        }
        let w = normalizing_unit(a[r][c], m);
        row_scale(&mut a[r], w, m);
        let pivot = a[r][c];
        let pivot_row = a[r].clone();
        for above in a.iter_mut().take(r) {
            let q = above[c] / pivot;
            if q != 0 {
                row_axpy(above, m - q % m, &pivot_row, m);
            }
        }
        // Howell property: the annihilator multiple of the pivot row must stay
        // in the span of the rows below.
        let ann = m / pivot;
        if ann != m {
            let mut extra = pivot_row.clone();
            row_scale(&mut extra, ann, m);
            if extra.iter().any(|&v| v != 0) {
                a.push(extra);
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|&v| v != 0));
    a
}

/// Howell basis of `{x : A x = 0}` where `a` lists the rows of `A`.
pub fn kernel(a: &[Row], ncols: usize, m: u64) -> Vec<Row> {
    let nrows = a.len();
    let width = nrows + ncols;
    let stacked: Vec<Row> = (0..ncols)
        .map(|j| {
            let mut row = vec![0u64; width];
            for (i, ar) in a.iter().enumerate() {
                row[i] = ar[j] % m;
            }
            row[nrows + j] = 1 % m;
            row
        })
        .collect();
    let h = howell_form(&stacked, width, m);
    let tails: Vec<Row> = h
        .into_iter()
        .filter(|row| row[..nrows].iter().all(|&v| v == 0))
        .map(|row| row[nrows..].to_vec())
        .collect();
    howell_form(&tails, ncols, m)
}

/// Solves `A x = b`, returning one solution if any exists.
pub fn solve(a: &[Row], ncols: usize, b: &[u64], m: u64) -> Option<Row> {
    assert_eq!(a.len(), b.len());
    // Unknowns (s, x) with s*(-b) + A x = 0; a solution exists iff s = 1 is
    // attainable, i.e. the leading pivot of the kernel is 1 in column 0.
    let augmented: Vec<Row> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut out = Vec::with_capacity(ncols + 1);
            out.push(sub_mod(0, bi % m, m));
            out.extend(row.iter().map(|v| v % m));
            out
        })
        .collect();
    let k = kernel(&augmented, ncols + 1, m);
    let first = k.first()?;
    (first[0] == 1 % m).then(|| first[1..].to_vec())
}

/// Multiplies a row-major matrix by a column vector.
pub fn mat_vec(a: &[Row], x: &[u64], m: u64) -> Row {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (&p, &q)| add_mod(acc, mul_mod(p, q, m), m))
        })
        .collect()
}

/// Rank and pivot columns of a matrix over the prime field `F_p`.
pub fn field_pivots(rows: &[Row], ncols: usize, p: u64) -> Vec<usize> {
    let mut a: Vec<Row> = rows
        .iter()
        .map(|r| r.iter().map(|v| v % p).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p).expect("nonzero in a field");
        row_scale(&mut a[r], inv, p);
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = p - row[c];
                row_axpy(row, f, &pivot_row, p);
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn span_contains(basis: &[Row], v: &[u64], n: usize, m: u64) -> bool {
        let mut with = basis.to_vec();
        with.push(v.to_vec());
        howell_form(&with, n, m) == basis
    }

    #[test]
    fn howell_of_two_mod_four() {
        // span{(2, 1)} over Z/4 also contains (0, 2).
        let h = howell_form(&[vec![2, 1]], 2, 4);
        assert_eq!(h, vec![vec![2, 1], vec![0, 2]]);
    }

    #[test]
    fn kernel_of_two_mod_four() {
        let k = kernel(&[vec![2]], 1, 4);
        assert_eq!(k, vec![vec![2]]);
        let k = kernel(&[vec![1, 1]], 2, 4);
        assert_eq!(k, vec![vec![1, 3]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        assert_eq!(solve(&[vec![2]], 1, &[1], 4), None);
        assert_eq!(solve(&[vec![3]], 1, &[1], 4), Some(vec![3]));
        let x = solve(&[vec![2, 0], vec![0, 3]], 2, &[2, 1], 4).unwrap();
        assert_eq!(mat_vec(&[vec![2, 0], vec![0, 3]], &x, 4), vec![2, 1]);
    }

    fn matrix_strategy(m: u64) -> impl Strategy<Value = (Vec<Row>, Vec<Row>)> {
        let rows = prop::collection::vec(prop::collection::vec(0..m, 4), 1..5);
        let mix = prop::collection::vec(prop::collection::vec(0..m, 5), 6);
        (rows, mix)
    }

    proptest! {
        #[test]
        fn howell_is_canonical((rows, mix) in matrix_strategy(12)) {
            let m = 12;
            let h = howell_form(&rows, 4, m);
            // Random combinations of the rows together with the rows
            // themselves span the same module.
            let mut other: Vec<Row> = mix
                .iter()
                .map(|c| {
                    let mut acc = vec![0u64; 4];
                    for (coef, row) in c.iter().zip(&rows) {
                        row_axpy(&mut acc, *coef, row, m);
                    }
                    acc
                })
                .collect();
            other.extend(rows.iter().rev().cloned());
            prop_assert_eq!(howell_form(&other, 4, m), h.clone());
            for row in &rows {
                prop_assert!(span_contains(&h, row, 4, m));
            }
        }

        #[test]
        fn kernel_is_complete(rows in prop::collection::vec(prop::collection::vec(0u64..8, 3), 1..4)) {
            let m = 8;
            let k = kernel(&rows, 3, m);
            for v in &k {
                prop_assert!(mat_vec(&rows, v, m).iter().all(|&x| x == 0));
            }
            // Brute force: every vector in the kernel lies in the span.
            for a in 0..m { for b in 0..m { for c in 0..m {
                let v = vec![a, b, c];
                if mat_vec(&rows, &v, m).iter().all(|&x| x == 0) {
                    prop_assert!(span_contains(&k, &v, 3, m));
                }
            }}}
        }
    }
}
