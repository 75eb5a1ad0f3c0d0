//! The sign conventions every report is computed under, and their hash.
//!
//! Reports embed the hash so stored fixtures fail loudly once any of these
//! conventions changes.

use sha2::{Digest, Sha256};

pub const CONVENTIONS: &str = "\
suspension: (sX)^k = X^{k+1}, |sx| = |x| - 1
dictionary: plain f(x_1..x_n) -> suspended entry times (-1)^{sum_i (n-i)|x_i|}
koszul: swapping adjacent u, v costs (-1)^{|u||v|} on suspended degrees
g-degree: alpha/beta entry D, gamma entry D + 1, D = suspended map degree
brackets: chi(x,y) = (-1)^{D_x} x o y^, lambda(g,a) = -(-1)^{D_g} g o a^, rho_m(b; g..g) = b(g..g)
differentials: absorbed as arity-1 structure maps; dg pairs twisted by s(delta_A) + s(delta_B)
gauge: time-one flow of X -> d^X_1(sh)
cone degree: g-degree + 1
";

/// First 16 hex digits of the SHA-256 of [`CONVENTIONS`].
pub fn convention_hash() -> String {
    let digest = Sha256::digest(CONVENTIONS.as_bytes());
    hex::encode(&digest[..8])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_length() {
        let h = convention_hash();
        assert_eq!(h.len(), 16);
        assert_eq!(h, convention_hash());
    }
}
