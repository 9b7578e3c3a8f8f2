//! 4×4 biquaternion codewords: exact determinant with formal x, y, and the
//! Kronecker factorisation of pure tensors.

use quatstbc::algebras::BiquaternionAlgebra;
use quatstbc::codes::{biquat_matrix, det2_formal, entry_field, factor_kronecker, kron_formal, Codeword4};
use quatstbc::exactnum::{BaseField, GaussianRational as G, QuadField};

fn main() -> quatstbc::Result<()> {
    let alg = BiquaternionAlgebra::transcendental(BaseField::GaussianRationals, G::from_ints(1, 2), G::from_ints(7, 0))?;
    let f = entry_field(&alg)?;

    let symbols: [G; 16] = std::array::from_fn(|k| G::from_ints(k as i64 % 3 - 1, (k as i64 * 5) % 3 - 1));
    let c = Codeword4::from_symbols(&alg, &symbols)?;
    let (d, r) = c.det_ball();
    println!("generic codeword: det ≈ {d:.4} (±{r:.1e}), factors: {}", factor_kronecker(&c).is_some());

    let ka = QuadField::new(alg.base(), alg.a().clone())?;
    let kc = QuadField::new(alg.base(), alg.c().clone())?;
    let u = [ka.elem(G::from_ints(1, 0), G::i()), ka.elem(G::from_ints(0, 1), G::from_ints(1, 0))];
    let w = [kc.elem(G::from_ints(2, 0), G::from_ints(1, 0)), kc.elem(G::from_ints(1, -1), G::from_ints(0, 0))];
    let z = |j: usize, k: usize| &f.embed_c(&w[j]) * &f.embed_a(&u[k]);
    let t = biquat_matrix(z(0, 0), z(0, 1), z(1, 0), z(1, 1), &alg)?;
    let fac = factor_kronecker(&t).expect("pure tensors factor");
    let (z1, z2) = (fac.z1_formal(&t), fac.z2_formal(&t));
    println!("pure tensor: Z = Z2 ⊗ Z1 exactly: {}", kron_formal(&z2, &z1) == t.matrix_formal());
    let (d1, d2) = (det2_formal(&z1), det2_formal(&z2));
    println!("det Z      = {}", t.det_formal());
    println!("det(Z2)²det(Z1)² equal: {}", t.det_formal() == d2.mul(&d2).mul(&d1).mul(&d1));
    Ok(())
}
