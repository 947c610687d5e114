//! Homomorphisms between direct sums of cyclic groups, stored by the images
//! of the standard generators.

use super::{FiniteAbelianGroup, GroupElement};
use crate::error::{MrsError, Result};
use crate::num::{factorize, mod_inverse};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    /// Row `i` holds the target coordinates of the image of the `i`-th generator.
    matrix: Vec<Vec<u64>>,
}

impl GroupHom {
    /// The homomorphism sending the `i`-th standard generator of `source` to `images[i]`.
    /// Fails unless every image has order dividing the matching factor.
    pub fn from_images(
        source: &FiniteAbelianGroup,
        target: &FiniteAbelianGroup,
        images: &[GroupElement],
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(MrsError::InvalidInput(format!(
                "need {} generator images, got {}",
                source.rank(),
                images.len()
            )));
        }
        for (img, &d) in images.iter().zip(source.factors()) {
            if img.group() != target {
                return Err(MrsError::GroupMismatch);
            }
            if d % img.order() != 0 {
                return Err(MrsError::InvalidInput(format!(
                    "image {img} has order {} not dividing {d}",
                    img.order()
                )));
            }
        }
        Ok(GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: images.iter().map(|g| g.coords().to_vec()).collect(),
        })
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        let images: Vec<GroupElement> = (0..g.rank())
            .map(|i| {
                let mut c = vec![0i64; g.rank()];
                c[i] = 1;
                g.element(&c).expect("rank matches")
            })
            .collect();
        Self::from_images(g, g, &images).expect("identity is well defined")
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        if g.group() != &self.source {
            return Err(MrsError::GroupMismatch);
        }
        let factors = self.target.factors();
        let mut out = vec![0u128; factors.len()];
        for (&x, row) in g.coords().iter().zip(&self.matrix) {
            for ((o, &m), &d) in out.iter_mut().zip(row).zip(factors) {
                *o = (*o + x as u128 * m as u128) % d as u128;
            }
        }
        let coords: Vec<i64> = out.into_iter().map(|x| x as i64).collect();
        self.target.element(&coords)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.source != self.target {
            return Err(MrsError::GroupMismatch);
        }
        let images: Result<Vec<GroupElement>> = (0..self.source.rank())
            .map(|i| {
                let coords: Vec<i64> = self.matrix[i].iter().map(|&x| x as i64).collect();
                other.apply(&self.target.element(&coords)?)
            })
            .collect();
        GroupHom::from_images(&self.source, &other.target, &images?)
    }

    /// Elements of the source mapped to zero (exhaustive).
    pub fn kernel(&self) -> Vec<GroupElement> {
        self.source
            .elements()
            .filter(|g| self.apply(g).map(|x| x.is_zero()).unwrap_or(false))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_surjective(&self) -> bool {
        let image_size = self.source.order() / self.kernel().len() as u64;
        image_size == self.target.order()
    }

    /// Exhaustive check of `f(a + b) = f(a) + f(b)`.
    pub fn is_homomorphism_exhaustive(&self) -> bool {
        let elems: Vec<GroupElement> = self.source.elements().collect();
        let imgs: Vec<GroupElement> = elems.iter().map(|g| self.apply(g).unwrap()).collect();
        elems.iter().enumerate().all(|(i, a)| {
            elems.iter().enumerate().all(|(j, b)| {
                let s = a + b;
                imgs[s.index()] == &imgs[i] + &imgs[j]
            })
        })
    }
}

struct Component {
    prime: u64,
    power: u64,
    factor: usize,
    /// Element of `Z_{d_factor}` that is 1 mod `power` and 0 mod the cofactor.
    idempotent: u64,
}

fn components(g: &FiniteAbelianGroup) -> Vec<Component> {
    let mut out = Vec::new();
    for (i, &d) in g.factors().iter().enumerate() {
        for (p, e) in factorize(d) {
            let power = p.pow(e);
            let cof = d / power;
            let inv = mod_inverse(cof as i64, power).expect("coprime by construction");
            out.push(Component { prime: p, power, factor: i, idempotent: (cof * inv) % d });
        }
    }
    out.sort_by_key(|c| (c.prime, c.power, c.factor));
    out
}

/// An explicit isomorphism between two isomorphic groups, obtained by matching
/// their primary cyclic components. `None` when the groups are not isomorphic.
pub fn isomorphism(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> Option<GroupHom> {
    if !a.is_isomorphic(b) {
        return None;
    }
    let ca = components(a);
    let cb = components(b);
    let mut images = vec![vec![0i64; b.rank()]; a.rank()];
    for (x, y) in ca.iter().zip(&cb) {
        debug_assert_eq!((x.prime, x.power), (y.prime, y.power));
        // generator of x's component inside Z_{d_x} is the idempotent; it must
        // land on the generator of y's component, the idempotent of y.
        let slot = &mut images[x.factor][y.factor];
        let d = b.factors()[y.factor] as i64;
        *slot = (*slot + y.idempotent as i64) % d;
    }
    let images: Vec<GroupElement> = images.iter().map(|c| b.element(c).expect("rank matches")).collect();
    Some(GroupHom::from_images(a, b, &images).expect("component images have matching orders"))
}
