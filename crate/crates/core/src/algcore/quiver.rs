use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A finite quiver with vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<Arrow>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Invalid("a quiver needs at least one vertex".into()));
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if a.source >= vertex_count || a.target >= vertex_count {
                return Err(Error::BadIndex(format!("arrow {} leaves the vertex range", a.label)));
            }
            if !seen.insert(a.label.clone()) {
                return Err(Error::Invalid(format!("duplicate arrow label {}", a.label)));
            }
        }
        Ok(Quiver { vertex_count, arrows })
    }

    /// The linearly oriented quiver `1 -> 2 -> ... -> n` with arrows `a1 .. a{n-1}`.
    pub fn linear_a(n: usize) -> Result<Self> {
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow { label: format!("a{}", i + 1), source: i, target: i + 1 })
            .collect();
        Quiver::new(n, arrows)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, label: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.label == label)
    }
}

/// Adds a reversed arrow `a*` for every arrow `a`; the starred arrows follow
/// the originals in the arrow list.
pub fn double_quiver(q: &Quiver) -> Quiver {
    let mut arrows = q.arrows.clone();
    arrows.extend(q.arrows.iter().map(|a| Arrow { label: format!("{}*", a.label), source: a.target, target: a.source }));
    Quiver { vertex_count: q.vertex_count, arrows }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_of_a2() {
        let q = Quiver::new(2, alloc::vec![Arrow { label: "a".into(), source: 0, target: 1 }]).unwrap();
        let d = double_quiver(&q);
        assert_eq!(d.arrows().len(), 2);
        assert_eq!(d.arrows()[1], Arrow { label: "a*".into(), source: 1, target: 0 });
    }

    #[test]
    fn double_without_arrows_is_unchanged() {
        let q = Quiver::new(3, Vec::new()).unwrap();
        assert_eq!(double_quiver(&q), q);
    }

    #[test]
    fn double_of_a3_swaps_ends() {
        let d = double_quiver(&Quiver::linear_a(3).unwrap());
        assert_eq!(d.arrows().len(), 4);
        for i in 0..2 {
            let (a, s) = (&d.arrows()[i], &d.arrows()[i + 2]);
            assert_eq!((a.source, a.target), (s.target, s.source));
        }
    }

    #[test]
    fn rejects_bad_arrows() {
        assert!(Quiver::new(1, alloc::vec![Arrow { label: "x".into(), source: 0, target: 1 }]).is_err());
        let dup = alloc::vec![
            Arrow { label: "x".into(), source: 0, target: 0 },
            Arrow { label: "x".into(), source: 0, target: 0 }
        ];
        assert!(Quiver::new(1, dup).is_err());
    }
}
