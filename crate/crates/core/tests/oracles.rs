//! Brute-force hom counts over GF(2), graded path enumeration for
//! preprojective algebras, and the Morita context table.

mod common;

use std::sync::Arc;

use common::*;
use pladder_core::algcore::{field_algebra, preprojective_algebra, same_structure_under, tensor_algebra, AModule};
use pladder_core::exactlin::{Matrix, PrimeField};
use pladder_core::pimod::PiModule;

#[test]
fn pi_hom_matches_gf2_enumeration() {
    for n in [2usize, 3] {
        let (instances, bad) = gf2_hom_agreement(n, 4);
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(instances > 100, "n = {n}: only {instances} instances");
    }
}

#[test]
fn gf2_enumeration_agrees_with_library_relations() {
    // The library accepts exactly the tuples the oracle enumerates.
    let fld = PrimeField::new(2).unwrap();
    let lam = Arc::new(field_algebra(&fld));
    let accepted = all_reps(&[1, 1, 1]).len();
    let mut lib = 0;
    for word in 0u64..16 {
        let f: Vec<_> = (0..2).map(|i| Matrix::from_data(&fld, 1, 1, vec![(word >> i) & 1]).unwrap()).collect();
        let g: Vec<_> = (0..2).map(|i| Matrix::from_data(&fld, 1, 1, vec![(word >> (i + 2)) & 1]).unwrap()).collect();
        let parts = (0..3).map(|_| AModule::new(&lam, 1, vec![Matrix::identity(&fld, 1)]).unwrap()).collect();
        if PiModule::new(&lam, parts, f, g).is_ok() {
            lib += 1;
        }
    }
    assert_eq!(lib, accepted);
}

#[test]
fn preprojective_dimensions_match_path_enumeration() {
    let bad = preprojective_dimension_mismatches();
    assert!(bad.is_empty(), "{bad:#?}");
}

#[test]
fn morita_ring_matches_tensor_with_preprojective_a2() {
    for fld in [PrimeField::gf101(), PrimeField::gf32003()] {
        assert!(morita_matches(&fld));
        let pi = preprojective_algebra(2, &fld).unwrap().algebra;
        let tensor = tensor_algebra(&field_algebra(&fld), &pi).unwrap();
        // Swapping the images of the two arrows breaks it.
        assert!(!same_structure_under(&delta00_from_rule(&fld), &tensor, &[0, 2, 3, 1]));
    }
}
