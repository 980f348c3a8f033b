use nsa_core::lr::random::random_table_relator;
use nsa_core::lr::{transfer_relation, uf_member, Cylinder, Space};
use nsa_core::seq::{compare_mod_frechet, Expr, Rel, SeqTerm, Verdict};
use nsa_core::stone::{annihilator_witness, GF2Matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space() -> Space {
    Space::new(2, vec![0, 1, 2])
}

fn mask(bits: u8) -> Vec<bool> {
    (0..8).map(|i| bits >> i & 1 == 1).collect()
}

proptest! {
    #[test]
    fn cylinder_operations_follow_their_masks(a in any::<u8>(), b in any::<u8>()) {
        let s = space();
        let (ca, cb) = (s.cylinder(&mask(a)), s.cylinder(&mask(b)));
        prop_assert_eq!(s.mask_of(&ca.complement()).unwrap(), mask(!a));
        prop_assert_eq!(s.mask_of(&ca.intersect(&cb)).unwrap(), mask(a & b));
        prop_assert_eq!(s.mask_of(&ca.union(&cb)).unwrap(), mask(a | b));
        prop_assert_eq!(ca.is_empty(), a == 0);
        prop_assert_eq!(ca.is_full(), a == u8::MAX);
        for i in 0..8 {
            let p = s.point(i);
            prop_assert_eq!(ca.contains(|e| p[e]), a >> i & 1 == 1);
        }
    }

    #[test]
    fn equal_masks_give_equal_cylinders(a in any::<u8>()) {
        let s = space();
        let c = s.cylinder(&mask(a));
        prop_assert_eq!(c.clone(), s.cylinder(&s.mask_of(&c).unwrap()));
        prop_assert_eq!(c.complement().complement(), c);
    }

    #[test]
    fn transfer_commutes_with_connectives(seed in any::<u64>(), r1 in any::<u16>(), r2 in any::<u16>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lr = random_table_relator(&mut rng, 2, 4, 12);
        let es: Vec<usize> = lr.uf().universe().unwrap().iter().copied().take(2).collect();
        let rel = |bits: u16| move |v: &[usize]| bits >> v.iter().fold(0, |a, &b| 2 * a + b) & 1 == 1;
        let p = transfer_relation(&lr, rel(r1), &es).unwrap();
        let q = transfer_relation(&lr, rel(r2), &es).unwrap();
        let not_p = transfer_relation(&lr, |v: &[usize]| !rel(r1)(v), &es).unwrap();
        let and = transfer_relation(&lr, |v: &[usize]| rel(r1)(v) && rel(r2)(v), &es).unwrap();
        prop_assert_eq!(not_p, !p);
        prop_assert_eq!(and, p && q);
    }

    #[test]
    fn ultrafilter_is_closed_upward(seed in any::<u64>(), a in any::<u8>(), b in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lr = random_table_relator(&mut rng, 2, 3, 12);
        let s = Space::new(2, lr.uf().universe().unwrap().to_vec());
        let n = s.points();
        let m = |x: u8| (0..n).map(|i| x >> i & 1 == 1).collect::<Vec<_>>();
        let (ca, cb) = (s.cylinder(&m(a)), s.cylinder(&m(b)));
        if uf_member(lr.uf(), &ca).unwrap() {
            prop_assert!(uf_member(lr.uf(), &ca.union(&cb)).unwrap());
        }
        prop_assert!(!uf_member(lr.uf(), &Cylinder::empty(2)).unwrap());
    }

    #[test]
    fn annihilator_vanishes_on_rows(rows in proptest::collection::vec(any::<u16>(), 0..12), cols in 1usize..=16) {
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| (0..cols).map(|j| r >> j & 1 == 1).collect()).collect();
        let m = GF2Matrix::from_rows(cols, &rows);
        match annihilator_witness(&m) {
            Some(w) => {
                prop_assert!(w.iter().any(|&b| b));
                prop_assert!(m.mul_vec(&w).iter().all(|&b| !b));
                prop_assert!(m.rank() < cols);
            }
            None => prop_assert_eq!(m.rank(), cols),
        }
    }

    #[test]
    fn polynomial_comparison_matches_large_indices(
        a in proptest::collection::vec(-5i64..=5, 1..4),
        b in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let poly = |cs: &[i64]| cs.iter().rev().fold(Expr::int(0), |acc, &c| Expr::add(Expr::mul(acc, Expr::inner()), Expr::int(c)));
        let (ta, tb) = (SeqTerm::new(poly(&a)).unwrap(), SeqTerm::new(poly(&b)).unwrap());
        let at = |cs: &[i64], n: i64| cs.iter().rev().fold(0i128, |acc, &c| acc * n as i128 + c as i128);
        // Coefficients are at most 5, so every root lies below 6.
        for rel in [Rel::Lt, Rel::Eq, Rel::Ge] {
            let want = (100..110).all(|n| rel.holds(at(&a, n).cmp(&at(&b, n))));
            prop_assert_eq!(compare_mod_frechet(&ta, &tb, rel), Verdict::from_bool(want));
        }
    }
}
