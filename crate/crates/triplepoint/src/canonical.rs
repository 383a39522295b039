//! Canonical codes for labeled complexes.
//!
//! Two complexes are isomorphic when some bijection of faces and edges
//! matches boundaries up to rotation and carries side labels and nodal
//! flags across; orientation-reversing bijections count. Face and edge
//! ids never matter.
//!
//! The code is computed by exhaustive rooted traversal: from every dart,
//! in both orientations, walk the map breadth-first through the two
//! permutations (next-in-face, other-side) and record, per visited dart,
//! the visit numbers of its two permutation images plus its label and
//! nodal flag. The lexicographically least of the 2·(dart count) runs is
//! the code, so equal codes mean isomorphic and vice versa. Disconnected
//! complexes are handled per component (codes sorted, then concatenated),
//! making the code total on structurally well-formed complexes.

use std::fmt;

use crate::complex::{ComplexError, IntersectionComplex, MapView, Side};

/// An isomorphism-invariant fingerprint of a labeled complex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode {
    bytes: Vec<u8>,
}

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Short stable fingerprint (FNV-1a 64 over the code bytes) for
    /// display purposes.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for &b in &self.bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.digest())
    }
}

/// One rooted breadth-first run. Visit numbers are assigned in encounter
/// order starting from `root`; each visited dart contributes the visit
/// numbers of its next-in-face image (inverted when `reversed`) and its
/// other-side image, then its side label and nodal flag.
fn encode_from(cx: &IntersectionComplex, view: &MapView, root: usize, reversed: bool) -> Vec<i64> {
    let next = |d: usize| if reversed { view.sigma_inv[d] } else { view.sigma[d] };
    let mut idx = vec![usize::MAX; view.ndarts];
    let mut order = Vec::new();
    idx[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let d = order[head];
        head += 1;
        for n in [next(d), view.alpha[d]] {
            if idx[n] == usize::MAX {
                idx[n] = order.len();
                order.push(n);
            }
        }
    }
    let mut code = Vec::with_capacity(order.len() * 4);
    for &d in &order {
        code.push(idx[next(d)] as i64);
        code.push(idx[view.alpha[d]] as i64);
        let edge = &cx.edges[view.dart_edge[d]];
        code.push(match view.dart_side[d] {
            Side::A => edge.label_a,
            Side::B => edge.label_b,
        });
        code.push(edge.nodal as i64);
    }
    code
}

/// Computes the canonical code of a complex. Errors only on structural
/// breakage (the same conditions under which parsing would fail).
pub fn canonical_form(cx: &IntersectionComplex) -> Result<CanonicalCode, ComplexError> {
    let view = MapView::build(cx)?;
    let mut component_codes: Vec<Vec<i64>> = Vec::new();
    for comp in view.components() {
        let mut best: Option<Vec<i64>> = None;
        for &root in &comp {
            for reversed in [false, true] {
                let code = encode_from(cx, &view, root, reversed);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        component_codes.push(best.expect("component has at least one dart"));
    }
    component_codes.sort();

    let mut bytes = Vec::new();
    bytes.extend((component_codes.len() as u32).to_be_bytes());
    for code in &component_codes {
        bytes.extend((code.len() as u32).to_be_bytes());
        for &w in code {
            bytes.extend(w.to_be_bytes());
        }
    }
    Ok(CanonicalCode { bytes })
}

/// Isomorphism test, orientation-reversing maps included. Equivalent to
/// comparing canonical codes.
pub fn is_isomorphic(a: &IntersectionComplex, b: &IntersectionComplex) -> Result<bool, ComplexError> {
    Ok(canonical_form(a)? == canonical_form(b)?)
}
