use std::sync::Arc;

use proptest::prelude::*;

use pladder_core::algcore::{catalog, AModule};
use pladder_core::exactlin::{Matrix, PrimeField};
use pladder_core::pimod::pi_hom;
use pladder_core::recfun::{FunctorName, Functors, Obj};
use pladder_core::rng::SplitMix64;

fn functors(name: &str, n: usize) -> Functors<PrimeField> {
    let fld = PrimeField::gf101();
    Functors::new(&Arc::new(catalog(name, &fld).unwrap()), n).unwrap()
}

fn lambda_name() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("k"), Just("dual"), Just("pathA2")]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_plus_nullity(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let fld = PrimeField::gf101();
        let m = Matrix::random(&fld, rows, cols, &mut SplitMix64::new(seed));
        prop_assert_eq!(m.rank() + m.kernel_basis().cols(), cols);
        prop_assert!(m.mul(&m.kernel_basis()).is_zero());
    }

    #[test]
    fn transpose_reverses_products(a in 1usize..5, b in 1usize..5, c in 1usize..5, seed in any::<u64>()) {
        let fld = PrimeField::gf32003();
        let mut rng = SplitMix64::new(seed);
        let x = Matrix::random(&fld, a, b, &mut rng);
        let y = Matrix::random(&fld, b, c, &mut rng);
        prop_assert_eq!(x.mul(&y).transpose(), y.transpose().mul(&x.transpose()));
    }

    #[test]
    fn splitmix_streams_are_reproducible(seed in any::<u64>(), k in any::<u64>()) {
        let mut a = SplitMix64::derive(seed, k);
        let mut b = SplitMix64::derive(seed, k);
        for _ in 0..16 {
            prop_assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn flip_is_an_involution_over_u1(lam in lambda_name(), n in 2usize..4, seed in any::<u64>()) {
        let fs = functors(lam, n);
        let m = Obj::Pi(fs.pi.ctx.random_module(&mut SplitMix64::new(seed), 2));
        let once = fs.apply(FunctorName::Flip, &m).unwrap();
        prop_assert_eq!(&fs.apply(FunctorName::Flip, &once).unwrap(), &m);
        prop_assert_eq!(fs.apply(FunctorName::U2, &once).unwrap(), fs.apply(FunctorName::U1, &m).unwrap());
    }

    #[test]
    fn homs_are_morphisms(lam in lambda_name(), n in 2usize..4, seed in any::<u64>()) {
        let fs = functors(lam, n);
        let mut rng = SplitMix64::new(seed);
        let x = fs.pi.ctx.random_module(&mut rng, 2);
        let y = fs.pi.ctx.random_module(&mut rng, 2);
        for h in pi_hom(&x, &y).unwrap() {
            prop_assert!(h.is_morphism());
        }
    }

    #[test]
    fn t1_and_t2_are_fully_faithful(lam in lambda_name(), n in 2usize..4, seed in any::<u64>()) {
        let fs = functors(lam, n);
        let mut rng = SplitMix64::new(seed);
        let a = AModule::random(fs.algebra(), &mut rng, 2);
        let b = AModule::random(fs.algebra(), &mut rng, 2);
        let d = a.hom_basis(&b).unwrap().len();
        for t in [FunctorName::T1, FunctorName::T2] {
            let (Obj::Pi(ta), Obj::Pi(tb)) = (
                fs.apply(t, &Obj::Lam(a.clone())).unwrap(),
                fs.apply(t, &Obj::Lam(b.clone())).unwrap(),
            ) else {
                panic!("T lands in tuples")
            };
            prop_assert_eq!(pi_hom(&ta, &tb).unwrap().len(), d);
        }
    }
}
