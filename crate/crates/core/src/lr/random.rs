//! Seeded generators of small relator instances for the regression harnesses.

use rand::seq::SliceRandom;
use rand::Rng;

use super::cylinder::Space;
use super::relator::LocalRelator;
use super::uf::{CylUF, MAX_TABLE_POINTS};

/// A table-backed relator with `|B| = nb`, `|E| = ne` and a random nonempty
/// universe of at most `max_points` points.
pub fn random_table_relator(rng: &mut impl Rng, nb: usize, ne: usize, max_points: usize) -> LocalRelator {
    let max_points = max_points.min(MAX_TABLE_POINTS);
    let mut idx: Vec<usize> = (0..ne).collect();
    idx.shuffle(rng);
    let mut size = rng.gen_range(1..=ne.max(1));
    while size > 1 && nb.pow(size as u32) > max_points {
        size -= 1;
    }
    let universe: Vec<usize> = idx.into_iter().take(size).collect();
    let space = Space::new(nb, universe);
    let point: Vec<usize> = (0..space.coords.len()).map(|_| rng.gen_range(0..nb)).collect();
    let uf = CylUF::table_at(nb, space.coords, &point).expect("a principal table is an ultrafilter");
    LocalRelator::sized(nb, ne, uf).expect("universe lies inside E")
}

/// An extension request: a relator, `η: I → E`, and an ultrafilter on
/// `B^{I ∪ {i}}` with the new coordinate last.
#[derive(Clone, Debug)]
pub struct ExtensionInstance {
    pub lr: LocalRelator,
    pub eta: Vec<usize>,
    pub u: CylUF,
}

/// About one request in five has a random (usually incompatible) `U`; the
/// rest extend the pushforward of `L` by a random value.
pub fn random_extension_instance(
    rng: &mut impl Rng,
    max_b: usize,
    max_e: usize,
    max_i: usize,
) -> ExtensionInstance {
    let nb = rng.gen_range(1..=max_b);
    let ne = rng.gen_range(1..=max_e);
    let ni = rng.gen_range(0..=max_i);
    let lr = if rng.gen_bool(0.5) {
        LocalRelator::sized(nb, ne, CylUF::PrincipalAt((0..ne).map(|_| rng.gen_range(0..nb)).collect()))
            .expect("point fits")
    } else {
        // Leave room for the adjoined coordinate.
        random_table_relator(rng, nb, ne, MAX_TABLE_POINTS / nb)
    };
    let coords = lr.coords();
    let eta: Vec<usize> = (0..ni).map(|_| coords[rng.gen_range(0..coords.len())]).collect();
    let atom = lr.uf().atom(nb, &coords).expect("valid ultrafilter");
    let mut point: Vec<usize> = if rng.gen_bool(0.2) {
        (0..ni).map(|_| rng.gen_range(0..nb)).collect()
    } else {
        eta.iter().map(|&e| atom[coords.binary_search(&e).unwrap()]).collect()
    };
    point.push(rng.gen_range(0..nb));
    let space = Space::new(nb, (0..=ni).collect());
    let u = if space.points() <= MAX_TABLE_POINTS && rng.gen_bool(0.5) {
        CylUF::table_at(nb, space.coords, &point).expect("a principal table is an ultrafilter")
    } else {
        CylUF::PrincipalAt(point)
    };
    ExtensionInstance { lr, eta, u }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_given_seed() {
        let a = random_extension_instance(&mut ChaCha8Rng::seed_from_u64(7), 3, 4, 2);
        let b = random_extension_instance(&mut ChaCha8Rng::seed_from_u64(7), 3, 4, 2);
        assert_eq!((a.lr, a.eta, a.u), (b.lr, b.eta, b.u));
    }

    #[test]
    fn table_universe_respects_the_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let lr = random_table_relator(&mut rng, 2, 3, 8);
            assert!(lr.coords().len() <= 3);
        }
    }
}
