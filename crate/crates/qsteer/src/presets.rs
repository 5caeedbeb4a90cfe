//! Pinned direction sets: Platonic axis families, the reference chained
//! directions, and published optimized sets used as regression anchors.
//!
//! All sets here are data, not derived output; the optimizer is expected to
//! match them, and the golden tests pin their evaluated values.

use nalgebra::{Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::functionals::DirectionSet;
use crate::states::UnitVector3;

fn set_from(raw: &[[f64; 3]]) -> DirectionSet {
    DirectionSet::new(
        raw.iter()
            .map(|&[x, y, z]| UnitVector3::new(x, y, z).expect("pinned axis is unit within gate"))
            .collect(),
    )
    .expect("pinned sets have at least two axes")
}

/// Platonic-solid axis sets for `n` in {2, 3, 4, 6, 10}: orthogonal pair,
/// orthogonal triple, cube diagonals, icosahedron vertex axes, dodecahedron
/// vertex axes.
///
/// The n = 6 and n = 10 sets are oriented with one vertex at the +z pole;
/// the closed-form linear visibilities in `scan` are exact for exactly this
/// orientation (the LHS bound itself is rotation invariant).
pub fn platonic(n: usize) -> Result<DirectionSet> {
    match n {
        2 => Ok(set_from(&[[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])),
        3 => Ok(set_from(&[
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ])),
        4 => {
            let s = 1.0 / 3.0_f64.sqrt();
            Ok(set_from(&[
                [s, s, s],
                [s, -s, -s],
                [-s, s, -s],
                [-s, -s, s],
            ]))
        }
        6 => {
            // One vertex at the pole, five on the upper ring at height 1/sqrt(5).
            let ring_r = 2.0 / 5.0_f64.sqrt();
            let ring_z = 1.0 / 5.0_f64.sqrt();
            let mut axes = vec![UnitVector3::Z];
            for k in 0..5 {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 5.0;
                axes.push(
                    UnitVector3::new(ring_r * phi.cos(), ring_r * phi.sin(), ring_z)
                        .expect("ring vertex is unit"),
                );
            }
            Ok(DirectionSet::new(axes).expect("six axes"))
        }
        10 => Ok(dodecahedron_pole_axes()),
        _ => Err(Error::UnsupportedN {
            n,
            supported: "2, 3, 4, 6, 10",
        }),
    }
}

/// The ten dodecahedron vertex axes, rotated so one vertex sits at the +z
/// pole, ordered by descending height then azimuth.
fn dodecahedron_pole_axes() -> DirectionSet {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let inv = 1.0 / phi;
    let mut vertices: Vec<Vector3<f64>> = Vec::with_capacity(20);
    for &sx in &[1.0, -1.0] {
        for &sy in &[1.0, -1.0] {
            for &sz in &[1.0, -1.0] {
                vertices.push(Vector3::new(sx, sy, sz));
            }
        }
    }
    for &a in &[inv, -inv] {
        for &b in &[phi, -phi] {
            vertices.push(Vector3::new(0.0, a, b));
            vertices.push(Vector3::new(a, b, 0.0));
            vertices.push(Vector3::new(b, 0.0, a));
        }
    }
    let pole = Vector3::new(1.0, 1.0, 1.0).normalize();
    let rot = Rotation3::rotation_between(&pole, &Vector3::z())
        .expect("pole and z are not antipodal");
    let mut axes: Vec<Vector3<f64>> = vertices
        .into_iter()
        .filter(|v| v.dot(&pole) > 0.0)
        .map(|v| rot * v.normalize())
        .collect();
    axes.sort_by(|a, b| {
        b.z.partial_cmp(&a.z)
            .unwrap()
            .then(a.y.atan2(a.x).partial_cmp(&b.y.atan2(b.x)).unwrap())
    });
    DirectionSet::new(
        axes.into_iter()
            .map(|v| UnitVector3::normalized(v).expect("vertex is nonzero"))
            .collect(),
    )
    .expect("ten axes")
}

/// Reference chained directions: `n` axes fanned across the xz half-plane at
/// polar angles `(2i - 1) pi / 2n`, so adjacent axes subtend `pi / n`.
pub fn chained_reference(n: usize) -> Result<DirectionSet> {
    if n < 2 {
        return Err(Error::TooFewSettings { n });
    }
    let axes = (1..=n)
        .map(|i| {
            let t = (2 * i - 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
            UnitVector3::from_angles(t, 0.0)
        })
        .collect();
    Ok(DirectionSet::new(axes).expect("n >= 2 axes"))
}

/// Published optimized chained sets for `n` in {4, 6, 10}, pinned verbatim to
/// their six-digit decimals (renormalized on construction).
pub fn optimized_chained(n: usize) -> Result<DirectionSet> {
    match n {
        4 => Ok(set_from(&[
            [0.387712, 0.325511, 0.862393],
            [0.662244, 0.014395, -0.74915],
            [-0.393555, -0.764746, 0.510174],
            [0.256293, 0.92029, 0.295602],
        ])),
        6 => Ok(set_from(&[
            [-0.40343, -0.594926, -0.695203],
            [0.786331, -0.613429, 0.073405],
            [0.39261, 0.6444655, 0.656141],
            [-0.445744, -0.539581, 0.714258],
            [0.795316, -0.595208, 0.114891],
            [0.435205, 0.494333, -0.752484],
        ])),
        10 => Ok(set_from(&[
            [-0.236305, -0.475636, 0.847308],
            [-0.858832, 0.00901434, 0.512178],
            [0.320136, 0.687104, 0.652228],
            [-0.137947, 0.990267, -0.0185065],
            [0.774103, 0.422827, -0.47115],
            [0.637737, 0.18577, 0.747517],
            [0.0326946, 0.0548708, 0.997958],
            [0.829632, -0.326344, -0.453001],
            [0.723801, -0.672939, 0.152531],
            [-0.296751, -0.478204, 0.826595],
        ])),
        _ => Err(Error::UnsupportedN {
            n,
            supported: "4, 6, 10",
        }),
    }
}

/// A four-setting example with irrational angles, pinned as
/// `(theta, phi) = (5pi/4, pi/3), (0, 11pi/6), (3pi/5, 3pi/4), (3pi/2, pi/2)`.
pub fn example_chained_4() -> DirectionSet {
    use std::f64::consts::PI;
    let angles = [
        (5.0 * PI / 4.0, PI / 3.0),
        (0.0, 11.0 * PI / 6.0),
        (3.0 * PI / 5.0, 3.0 * PI / 4.0),
        (3.0 * PI / 2.0, PI / 2.0),
    ];
    DirectionSet::new(
        angles
            .iter()
            .map(|&(t, p)| UnitVector3::from_angles(t, p))
            .collect(),
    )
    .expect("four axes")
}

/// Resolves a CLI preset name to its pinned set.
///
/// Supported names: `platonic-{2,3,4,6,10}`, `chained-eq6-N` for `2 <= N <= 24`,
/// `paper-eq15`, `paper-eq17`, `paper-eq18-0`, `paper-sec3a`.
pub fn preset_by_name(name: &str) -> Result<DirectionSet> {
    let unknown = || Error::UnknownPreset {
        name: name.to_string(),
    };
    if let Some(rest) = name.strip_prefix("platonic-") {
        let n: usize = rest.parse().map_err(|_| unknown())?;
        return platonic(n);
    }
    if let Some(rest) = name.strip_prefix("chained-eq6-") {
        let n: usize = rest.parse().map_err(|_| unknown())?;
        if n > crate::functionals::MAX_ENUM_SETTINGS {
            return Err(Error::EnumerationTooLarge {
                n,
                max: crate::functionals::MAX_ENUM_SETTINGS,
            });
        }
        return chained_reference(n);
    }
    match name {
        "paper-eq15" => optimized_chained(4),
        "paper-eq17" => optimized_chained(6),
        "paper-eq18-0" => optimized_chained(10),
        "paper-sec3a" => Ok(example_chained_4()),
        _ => Err(unknown()),
    }
}
