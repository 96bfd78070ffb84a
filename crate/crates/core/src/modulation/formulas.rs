//! Closed-form right-hand sides shared by the standalone solvers and the coupled system.
//!
//! Everything acts on [`Jet`]s so that the same expressions serve time stepping
//! (order-0 jets) and the Taylor-mode time-derivative closure.

use super::jet::Jet;

/// `(1/36) w^(5) + (9/4) w^2 w' + (1/2) w w''' + (3/4) w' w''`, whose derivative is the second
/// slow-time derivative of a KdV solution.
pub fn dtt_integrand(w: &Jet) -> Jet {
    let w1 = w.dx(1);
    let w2 = w.dx(2);
    let w3 = w.dx(3);
    let w5 = w.dx(5);
    (1.0 / 36.0) * &w5 + (9.0 / 4.0) * &(&w.square() * &w1) + 0.5 * &(w * &w3) + 0.75 * &(&w1 * &w2)
}

/// Antiderivative of [`dtt_integrand`]: `(1/36) w'''' + (3/4) w^3 + (1/2) w w'' + (1/8) w'^2`.
pub fn dtt_integrand_antiderivative(w: &Jet) -> Jet {
    let w1 = w.dx(1);
    let w2 = w.dx(2);
    let w4 = w.dx(4);
    (1.0 / 36.0) * &w4 + 0.75 * &(&w.square() * w) + 0.5 * &(w * &w2) + 0.125 * &w1.square()
}

/// Driving term of the linearized KdV equation for profile `w` and comoving transport field `phi`.
///
/// `3(w phi)' + 4 w^2 w' + (7/3) w w''' + (11/3) w' w'' + (2/15) w^(5) + (1/3) phi''' - d^{-1} d_T^2 w`,
/// the last term taken from its closed-form integrand.
pub fn driving(w: &Jet, phi: &Jet) -> Jet {
    let w1 = w.dx(1);
    let w2 = w.dx(2);
    let w3 = w.dx(3);
    let w5 = w.dx(5);
    3.0 * &(w * phi).dx(1)
        + 4.0 * &(&w.square() * &w1)
        + (7.0 / 3.0) * &(w * &w3)
        + (11.0 / 3.0) * &(&w1 * &w2)
        + (2.0 / 15.0) * &w5
        + (1.0 / 3.0) * &phi.dx(3)
        - dtt_integrand(w)
}

/// Antiderivative of [`driving`] in closed form.
pub fn driving_antiderivative(w: &Jet, phi: &Jet) -> Jet {
    let w1 = w.dx(1);
    let w2 = w.dx(2);
    let w4 = w.dx(4);
    3.0 * &(w * phi)
        + (4.0 / 3.0) * &(&w.square() * w)
        + (7.0 / 3.0) * &(w * &w2)
        + (2.0 / 3.0) * &w1.square()
        + (2.0 / 15.0) * &w4
        + (1.0 / 3.0) * &phi.dx(2)
        - dtt_integrand_antiderivative(w)
}

/// Cross-interaction driving `J^s` of the W3 equation, in laboratory variables.
pub fn cross_driving(u: &Jet, v: &Jet, f: &Jet, g: &Jet, p_minus: &Jet, p_plus: &Jet) -> Jet {
    let uu = u.square();
    let vv = v.square();
    let a = &(&(3.0 * g) + &(3.0 * p_plus)) + &(&(4.0 * &vv) + &((7.0 / 3.0) * &v.dx(2)));
    let b = &(&(3.0 * f) + &(3.0 * p_minus)) + &(&(4.0 * &uu) + &((7.0 / 3.0) * &u.dx(2)));
    (u * &a).dx(1) + (v * &b).dx(1) + 4.0 * &(&u.dx(1) * &v.dx(1)).dx(1)
}

/// `S` with `W3_tautau - W3_betabeta = d_beta S`:
/// `(9/4)(u+v)(uv)' + (1/2)(uv)''' - J^s`.
pub fn w3_source(u: &Jet, v: &Jet, f: &Jet, g: &Jet, p_minus: &Jet, p_plus: &Jet) -> Jet {
    let uv = u * v;
    (9.0 / 4.0) * &(&(u + v) * &uv.dx(1)) + 0.5 * &uv.dx(3) - cross_driving(u, v, f, g, p_minus, p_plus)
}
