//! Class group data against brute-force searches that share no code with the
//! cycle construction.

use std::cmp::Ordering;
use std::collections::HashMap;

use proptest::prelude::*;
use qcroots::arith::Discriminant;
use qcroots::qfield::{pell_fundamental, reduced_forms, ClassGroupData, Mat2, QForm, QuadInt};

fn valid_positive(max: i64) -> Vec<i64> {
    (2..=max).filter(|&d| Discriminant::new(d).is_ok()).collect()
}

fn cg(d: i64) -> ClassGroupData {
    ClassGroupData::new(Discriminant::new(d).unwrap()).unwrap()
}

/// Smallest `y ≥ 1` with `1 + Dy²` a perfect square.
fn pell_brute(d: i64) -> (i128, i128) {
    (1i128..)
        .find_map(|y| {
            let x2 = 1 + d as i128 * y * y;
            let x = (x2 as f64).sqrt().round() as i128;
            (-1..=1).map(|k| x + k).find(|x| x * x == x2).map(|x| (x, y))
        })
        .unwrap()
}

#[test]
fn pell_examples() {
    let unit = |d| pell_fundamental(Discriminant::new(d).unwrap()).unwrap();
    assert_eq!(unit(2), QuadInt::new(3, 2, 1, 2));
    assert_eq!(unit(3), QuadInt::new(2, 1, 1, 3));
    assert_eq!(unit(10), QuadInt::new(19, 6, 1, 10));
}

#[test]
fn pell_is_minimal_up_to_50() {
    for d in valid_positive(50) {
        let eps = pell_fundamental(Discriminant::new(d).unwrap()).unwrap();
        let (x, y, den) = eps.parts();
        assert_eq!(den, 1);
        assert_eq!((x, y), pell_brute(d), "D={d}");
        assert_eq!(eps.norm(), (1, 1));
        assert!(eps.is_totally_positive());
    }
}

#[test]
fn pell_rejects_negative() {
    assert!(pell_fundamental(Discriminant::new(-1).unwrap()).is_err());
}

#[test]
fn reduce_examples() {
    let f = QForm::new(1, 2, -1);
    assert!(f.is_reduced(2));
    assert_eq!(f.reduce(2), (f, Mat2::IDENTITY));

    let g = QForm::new(1, 0, -2);
    let (r, t) = g.reduce(2);
    assert!(r.is_reduced(2));
    assert_eq!(t.det(), 1);
    assert_eq!(g.compose(&t), r);
    let data = cg(2);
    assert_eq!(data.classify(&g).unwrap().0, data.classify(&f).unwrap().0);
}

#[test]
fn reduced_forms_match_inequalities() {
    for d in valid_positive(60) {
        let s = (4.0 * d as f64).sqrt();
        let mut brute = Vec::new();
        let k = 4 * d as i128;
        for a in -k..=k {
            for b in 1..=k {
                if a == 0 || (b * b - 4 * d as i128) % (4 * a) != 0 {
                    continue;
                }
                let c = (b * b - 4 * d as i128) / (4 * a);
                let (bf, af) = (b as f64, a.abs() as f64);
                if bf < s && (s - 2.0 * af).abs() < bf {
                    brute.push(QForm::new(a, b, c));
                }
            }
        }
        brute.sort();
        assert_eq!(reduced_forms(d), brute, "D={d}");
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        self.0[rx] = ry;
    }
}

/// Connects all forms of discriminant `4D` inside a coefficient box under the
/// generators `S`, `T` of SL(2, ℤ) and counts the components met by reduced
/// forms.
fn classes_by_box_search(d: i64, k: i128) -> usize {
    let delta = 4 * d as i128;
    let mut forms = Vec::new();
    for a in -k..=k {
        for b in -k..=k {
            if a != 0 && (b * b - delta) % (4 * a) == 0 {
                let c = (b * b - delta) / (4 * a);
                if c.abs() <= k {
                    forms.push(QForm::new(a, b, c));
                }
            }
        }
    }
    let index: HashMap<QForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut uf = UnionFind((0..forms.len()).collect());
    for (i, f) in forms.iter().enumerate() {
        for g in [Mat2::S, Mat2::T] {
            if let Some(&j) = index.get(&f.compose(&g)) {
                uf.union(i, j);
            }
        }
    }
    let mut roots: Vec<usize> = reduced_forms(d).iter().map(|f| uf.find(index[f])).collect();
    roots.sort();
    roots.dedup();
    roots.len()
}

#[test]
fn class_number_examples() {
    assert_eq!(cg(2).h_plus, 1);
    assert_eq!(cg(3).h_plus, 2);
    assert_eq!(cg(10).h_plus, 2);
    assert_eq!(classes_by_box_search(15, 90), 4);
    assert_eq!(classes_by_box_search(26, 156), 2);
}

#[test]
fn class_numbers_match_box_search() {
    for d in [2, 3, 10, 15, 26, 34] {
        let data = cg(d);
        assert_eq!(data.h_plus, classes_by_box_search(d, 6 * d as i128), "D={d}");
        assert_eq!(data.h_plus, data.classes.len());
    }
}

#[test]
fn cycles_partition_reduced_forms() {
    for d in valid_positive(80) {
        let data = cg(d);
        let mut seen: Vec<QForm> = data.classes.iter().flat_map(|c| c.cycle.clone()).collect();
        let total = seen.len();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), total, "D={d}: a form lies in two cycles");
        assert_eq!(seen, reduced_forms(d), "D={d}");
        for class in &data.classes {
            for (j, f) in class.cycle.iter().enumerate() {
                let next = class.cycle[(j + 1) % class.cycle.len()];
                assert_eq!(f.rho(d).0, next, "D={d}");
            }
            assert_eq!(class.form, *class.cycle.iter().min().unwrap());
        }
    }
}

#[test]
fn pairing_matrix_is_unimodular_up_to_50() {
    for d in valid_positive(50) {
        for class in &cg(d).classes {
            assert_eq!(class.pairing_unimodular.det().abs(), 1, "D={d} l={}", class.index);
        }
    }
}

#[test]
fn basis_has_positive_determinant() {
    for d in valid_positive(50) {
        for class in &cg(d).classes {
            assert_eq!(class.basis.det().sign1(), Ordering::Greater, "D={d}");
        }
    }
}

#[test]
fn stabilizer_examples() {
    let data = cg(2);
    let m = data.class(1).stabilizer;
    assert_eq!(m.trace(), 6);
    assert_eq!(m.det(), 1);
}

/// Möbius action on an exact quadratic irrational.
fn mobius(g: &Mat2, z: QuadInt) -> QuadInt {
    let d = z.field();
    let q = |n| QuadInt::int(n, d);
    (q(g.a) * z + q(g.b)) * (q(g.c) * z + q(g.d)).inv().unwrap()
}

#[test]
fn stabilizer_fixes_endpoints_and_has_unit_trace() {
    for d in valid_positive(80) {
        let data = cg(d);
        let (x, _, _) = data.eps0.parts();
        for class in &data.classes {
            let m = class.stabilizer;
            assert_eq!(m.det(), 1);
            assert_eq!(m.trace(), 2 * x, "D={d}");
            for e in class.endpoints {
                assert_eq!(mobius(&m, e), e, "D={d} l={}", class.index);
            }
            // Both endpoints are roots of a primitive form of discriminant 4D.
            let f = class.endpoint_form();
            assert_eq!(f.disc(), 4 * d as i128);
            for e in class.endpoints {
                let (a, b, c) = (f.a, f.b, f.c);
                let val = QuadInt::int(a, d) * e * e + QuadInt::int(b, d) * e + QuadInt::int(c, d);
                assert!(val.is_zero());
            }
        }
    }
}

#[test]
fn classify_returns_the_right_transcript() {
    let d = 10;
    let data = cg(d);
    let mut g = Mat2::IDENTITY;
    for step in 0..40 {
        g = if step % 3 == 0 { g * Mat2::S } else { g * Mat2::T };
        for class in &data.classes {
            let f = class.form.compose(&g);
            let (l, t) = data.classify(&f).unwrap();
            assert_eq!(l, class.index);
            assert_eq!(data.class(l).form.compose(&t), f);
        }
    }
}

#[test]
fn total_length_formula() {
    let data = cg(2);
    let expected = 2.0 * (3.0 + 2.0 * 2f64.sqrt()).ln();
    assert!((data.total_length() - expected).abs() < 1e-14);
}

proptest! {
    #[test]
    fn quadint_field_laws(a in -50i128..50, b in -50i128..50, c in -50i128..50, e in -50i128..50, den in 1i128..9) {
        let d = 7;
        let x = QuadInt::new(a, b, den, d);
        let y = QuadInt::new(c, e, 1, d);
        prop_assert_eq!(x * y, y * x);
        prop_assert_eq!((x + y) - y, x);
        prop_assert_eq!((x * y).conj(), x.conj() * y.conj());
        if !x.is_zero() {
            prop_assert_eq!(x * x.inv().unwrap(), QuadInt::int(1, d));
        }
        let exact = |v: QuadInt| v.sign1();
        let float = x.sigma1();
        if float.abs() > 1e-9 {
            prop_assert_eq!(exact(x), if float > 0.0 { Ordering::Greater } else { Ordering::Less });
        }
    }

    #[test]
    fn reduction_transcript_is_proper(d in prop::sample::select(vec![2i64, 3, 6, 7, 10, 11, 15, 26, 79]),
                                      a in -40i128..40, c in -40i128..40, s in 0usize..1000) {
        // Move a reduced form by an arbitrary word in S and T, then reduce back.
        let start = reduced_forms(d)[s % reduced_forms(d).len()];
        let mut g = Mat2::IDENTITY;
        for k in 0..(a.unsigned_abs() % 7) {
            g = g * Mat2::T.pow(c.signum() as i64 * ((k as i64) + 1)) * Mat2::S;
        }
        let f = start.compose(&g);
        let (r, t) = f.reduce(d);
        prop_assert!(r.is_reduced(d));
        prop_assert_eq!(t.det(), 1);
        prop_assert_eq!(f.compose(&t), r);
        let data = cg(d);
        prop_assert_eq!(data.classify(&f).unwrap().0, data.classify(&start).unwrap().0);
    }
}
