//! Matrices shipped with the crate, addressable as `builtin:NAME`.

pub struct Builtin {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const BUILTINS: &[Builtin] = &[
    Builtin {
        name: "ar4ja_r12",
        description: "AR4JA rate-1/2 protomatrix, 3x5, column 4 punctured",
        text: include_str!("../data/ar4ja_r12.pm"),
    },
    Builtin {
        name: "ar4ja_r23",
        description: "AR4JA rate-2/3 protomatrix, 3x7, column 6 punctured",
        text: include_str!("../data/ar4ja_r23.pm"),
    },
    Builtin {
        name: "ar4ja_r45",
        description: "AR4JA rate-4/5 protomatrix, 3x11, column 10 punctured",
        text: include_str!("../data/ar4ja_r45.pm"),
    },
    Builtin {
        name: "ar4ja_r12_x4",
        description: "type-I 12x20 first-stage expansion of ar4ja_r12 by 4, columns 16-19 punctured",
        text: include_str!("../data/ar4ja_r12_x4.pm"),
    },
    Builtin {
        name: "ar4ja_r12_x4.shifts",
        description: "shift sets producing ar4ja_r12_x4",
        text: include_str!("../data/ar4ja_r12_x4.shifts"),
    },
    Builtin {
        name: "row_removal_example",
        description: "3x5 matrix where removing a row tightens the bound from 30 to 10",
        text: include_str!("../data/row_removal_example.pm"),
    },
    Builtin {
        name: "three_copy",
        description: "2x3 protomatrix used for the N=3 expansion walkthrough",
        text: include_str!("../data/three_copy.pm"),
    },
    Builtin {
        name: "three_copy.shifts",
        description: "N=3 shift sets for three_copy",
        text: include_str!("../data/three_copy.shifts"),
    },
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}
