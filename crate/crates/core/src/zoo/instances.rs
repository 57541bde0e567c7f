//! Named function instances: the worked examples plus small members of each
//! family used by the sweeps.

use crate::error::{Error, Result};
use crate::field::Field;

use super::{Term, VectorialFnSpec};

pub struct Instance {
    pub name: &'static str,
    pub condition_a: bool,
    pub summary: &'static str,
}

const INSTANCES: &[Instance] = &[
    Instance {
        name: "example1",
        condition_a: true,
        summary: "F3 p=3 r=4 m=2 a=1",
    },
    Instance {
        name: "example2",
        condition_a: true,
        summary: "F3 p=3 r=8 m=4 a=1",
    },
    Instance {
        name: "example3",
        condition_a: true,
        summary: "F4 p=5 m=2 a=(1,1,1,g)",
    },
    Instance {
        name: "example4",
        condition_a: true,
        summary: "F6 p=7 r'=4 r''=2 m=2 alpha=(1,g^2,g^2)",
    },
    Instance {
        name: "example5",
        condition_a: true,
        summary: "F1 p=3 r'=4 m=4 e=7",
    },
    Instance {
        name: "example6",
        condition_a: true,
        summary: "F5 p=11 r'=2 m=2 g(x)=x^61+2x",
    },
    Instance {
        name: "f1-p3-r2-m1",
        condition_a: true,
        summary: "F1 p=3 r'=2 m=1 e=1",
    },
    Instance {
        name: "f1-p3-r2-m2",
        condition_a: true,
        summary: "F1 p=3 r'=2 m=2 e=1",
    },
    Instance {
        name: "f1-p3-r2-m2-e5",
        condition_a: true,
        summary: "F1 p=3 r'=2 m=2 a=g e=5",
    },
    Instance {
        name: "f2-p3-r2-m1",
        condition_a: true,
        summary: "F2 p=3 r'=2 m=1 L=y^3+g y",
    },
    Instance {
        name: "f2-p3-r2-m2",
        condition_a: true,
        summary: "F2 p=3 r'=2 m=2 L=g y",
    },
    Instance {
        name: "f3-p3-r4-m1",
        condition_a: true,
        summary: "F3 p=3 r=4 m=1 a=1",
    },
    Instance {
        name: "f3-p3-r4-m1-ns",
        condition_a: true,
        summary: "F3 p=3 r=4 m=1 a=g",
    },
    Instance {
        name: "f3-p3-r4-m2-ns",
        condition_a: true,
        summary: "F3 p=3 r=4 m=2 a=g",
    },
    Instance {
        name: "f3-p5-r4-m2",
        condition_a: true,
        summary: "F3 p=5 r=4 m=2 a=1",
    },
    Instance {
        name: "f3-p7-r4-m1",
        condition_a: true,
        summary: "F3 p=7 r=4 m=1 a=1",
    },
    Instance {
        name: "f3-p3-r8-m2",
        condition_a: true,
        summary: "F3 p=3 r=8 m=2 a=1",
    },
    Instance {
        name: "f4-p3-m1-t4",
        condition_a: true,
        summary: "F4 p=3 m=1 a=(1,1,1,1)",
    },
    Instance {
        name: "f4-p3-m2-t2",
        condition_a: true,
        summary: "F4 p=3 m=2 a=(1,1)",
    },
    Instance {
        name: "f4-p3-m2-t2-ns",
        condition_a: true,
        summary: "F4 p=3 m=2 a=(1,g)",
    },
    Instance {
        name: "f4-p5-m2-t2",
        condition_a: true,
        summary: "F4 p=5 m=2 a=(1,1)",
    },
    Instance {
        name: "f4-p3-m2-t3",
        condition_a: false,
        summary: "F4 p=3 m=2 a=(1,1,1), odd t",
    },
    Instance {
        name: "f5-p3-r2-m1",
        condition_a: true,
        summary: "F5 p=3 r'=2 m=1 defaults",
    },
    Instance {
        name: "f5-p3-r2-m2",
        condition_a: true,
        summary: "F5 p=3 r'=2 m=2 alpha=g",
    },
    Instance {
        name: "f5-p5-r2-m2",
        condition_a: true,
        summary: "F5 p=5 r'=2 m=2 G=x^7",
    },
    Instance {
        name: "f6-p3-r2-r1-m1",
        condition_a: true,
        summary: "F6 p=3 r'=2 r''=1 m=1",
    },
    Instance {
        name: "f6-p3-r2-r2-m1",
        condition_a: true,
        summary: "F6 p=3 r'=2 r''=2 m=1 alpha=(1,g^2,g^2)",
    },
];

pub fn list() -> &'static [Instance] {
    INSTANCES
}

fn gen(p: u32, n: u32) -> Result<u32> {
    Ok(Field::conway(p, n)?.generator().0)
}

fn gen_sq(p: u32, n: u32) -> Result<u32> {
    let f = Field::conway(p, n)?;
    Ok(f.pow(f.generator(), 2).0)
}

pub fn instance(name: &str) -> Result<VectorialFnSpec> {
    use VectorialFnSpec::*;
    Ok(match name {
        "example1" => QuadraticTrace {
            p: 3,
            r: 4,
            m: 2,
            a: 1,
        },
        "example2" => QuadraticTrace {
            p: 3,
            r: 8,
            m: 4,
            a: 1,
        },
        "example3" => DiagonalQuadratic {
            p: 5,
            m: 2,
            a: vec![1, 1, 1, gen(5, 2)?],
        },
        "example4" => {
            let g2 = gen_sq(7, 4)?;
            Mixed {
                p: 7,
                r_prime: 4,
                r_second: 2,
                m: 2,
                alpha: [1, g2, g2],
                beta: 1,
                gamma: 1,
                l: vec![1],
            }
        }
        "example5" => XyPower {
            p: 3,
            r_prime: 4,
            m: 4,
            a: 1,
            e: 7,
        },
        "example6" => PartialSpread {
            p: 11,
            r_prime: 2,
            m: 2,
            alpha: 1,
            perm: None,
            g: Some(vec![Term { coeff: 1, exp: 61 }, Term { coeff: 2, exp: 1 }]),
        },
        "f1-p3-r2-m1" => XyPower {
            p: 3,
            r_prime: 2,
            m: 1,
            a: 1,
            e: 1,
        },
        "f1-p3-r2-m2" => XyPower {
            p: 3,
            r_prime: 2,
            m: 2,
            a: 1,
            e: 1,
        },
        "f1-p3-r2-m2-e5" => XyPower {
            p: 3,
            r_prime: 2,
            m: 2,
            a: gen(3, 2)?,
            e: 5,
        },
        "f2-p3-r2-m1" => XyLinearized {
            p: 3,
            r_prime: 2,
            m: 1,
            a: 1,
            l: vec![gen(3, 2)?, 1],
        },
        "f2-p3-r2-m2" => XyLinearized {
            p: 3,
            r_prime: 2,
            m: 2,
            a: 1,
            l: vec![gen(3, 2)?],
        },
        "f3-p3-r4-m1" => QuadraticTrace {
            p: 3,
            r: 4,
            m: 1,
            a: 1,
        },
        "f3-p3-r4-m1-ns" => QuadraticTrace {
            p: 3,
            r: 4,
            m: 1,
            a: gen(3, 4)?,
        },
        "f3-p3-r4-m2-ns" => QuadraticTrace {
            p: 3,
            r: 4,
            m: 2,
            a: gen(3, 4)?,
        },
        "f3-p5-r4-m2" => QuadraticTrace {
            p: 5,
            r: 4,
            m: 2,
            a: 1,
        },
        "f3-p7-r4-m1" => QuadraticTrace {
            p: 7,
            r: 4,
            m: 1,
            a: 1,
        },
        "f3-p3-r8-m2" => QuadraticTrace {
            p: 3,
            r: 8,
            m: 2,
            a: 1,
        },
        "f4-p3-m1-t4" => DiagonalQuadratic {
            p: 3,
            m: 1,
            a: vec![1, 1, 1, 1],
        },
        "f4-p3-m2-t2" => DiagonalQuadratic {
            p: 3,
            m: 2,
            a: vec![1, 1],
        },
        "f4-p3-m2-t2-ns" => DiagonalQuadratic {
            p: 3,
            m: 2,
            a: vec![1, gen(3, 2)?],
        },
        "f4-p5-m2-t2" => DiagonalQuadratic {
            p: 5,
            m: 2,
            a: vec![1, 1],
        },
        "f4-p3-m2-t3" => DiagonalQuadratic {
            p: 3,
            m: 2,
            a: vec![1, 1, 1],
        },
        "f5-p3-r2-m1" => PartialSpread {
            p: 3,
            r_prime: 2,
            m: 1,
            alpha: 1,
            perm: None,
            g: None,
        },
        "f5-p3-r2-m2" => PartialSpread {
            p: 3,
            r_prime: 2,
            m: 2,
            alpha: gen(3, 2)?,
            perm: None,
            g: None,
        },
        "f5-p5-r2-m2" => PartialSpread {
            p: 5,
            r_prime: 2,
            m: 2,
            alpha: 1,
            perm: Some(vec![Term { coeff: 1, exp: 7 }]),
            g: None,
        },
        "f6-p3-r2-r1-m1" => Mixed {
            p: 3,
            r_prime: 2,
            r_second: 1,
            m: 1,
            alpha: [1, 1, 1],
            beta: 1,
            gamma: 1,
            l: vec![1],
        },
        "f6-p3-r2-r2-m1" => {
            let g2 = gen_sq(3, 2)?;
            Mixed {
                p: 3,
                r_prime: 2,
                r_second: 2,
                m: 1,
                alpha: [1, g2, g2],
                beta: 1,
                gamma: 1,
                l: vec![gen(3, 2)?, 1],
            }
        }
        other => return Err(Error::UnknownInstance(other.to_string())),
    })
}
