mod common;

use rug::Float;

// Published decimal expansions, used only to check the oracles themselves.
const PI: &str = "3.14159265358979323846264338327950288419716939937510582097494459";
const CATALAN: &str = "0.915965594177219015054603514932384110774149374281672134266498";
const GAMMA: &str = "0.577215664901532860606512090082402431042159335939923598805767";
const ZETA3: &str = "1.202056903159594285399738161511449990764986292340498881792271";
const BETA4: &str = "0.98894455174110533610842263322837782";

fn close(x: &Float, decimal: &str, digits: i32) {
    let y = Float::with_val(256, Float::parse(decimal).unwrap());
    let d = Float::with_val(256, x - &y).abs();
    assert!(d < Float::with_val(64, 10f64.powi(-digits)), "{x} vs {decimal}");
}

#[test]
fn pi_machin() {
    close(&common::pi(256), PI, 60);
}

#[test]
fn catalan_accelerated() {
    close(&common::catalan(256), CATALAN, 58);
}

#[test]
fn beta4_accelerated() {
    close(&common::dirichlet_beta4(256), BETA4, 34);
}

#[test]
fn zeta3_apery() {
    close(&common::zeta3(256), ZETA3, 58);
}

#[test]
fn gamma_euler_maclaurin() {
    close(&common::euler_gamma(256), GAMMA, 55);
}

#[test]
fn ulp_distance() {
    let one = Float::with_val(128, 1);
    let next = Float::with_val(128, Float::with_val(300, 1) + Float::with_val(300, Float::i_exp(1, -127)));
    assert_eq!(common::ulps(&next, &one, 128), 1);
    assert_eq!(common::ulps(&one, &one, 128), 0);
}
