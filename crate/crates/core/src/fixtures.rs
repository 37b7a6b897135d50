//! Worked cases used as golden data by the test suites and `verify --case`.

/// `(b rows, c, c', b' rows, h)` for `R(b (x) c) = c' (x) b'` over three letters.
pub type RCase = (&'static [&'static [u8]], u8, u8, &'static [&'static [u8]], u8);

pub const R_CASES: [RCase; 2] = [
    (&[&[1, 1, 2], &[2, 2, 3]], 1, 2, &[&[1, 1, 1], &[2, 2, 3]], 0),
    (&[&[1, 1, 2], &[2, 2, 3]], 3, 1, &[&[1, 2, 2], &[2, 3, 3]], 1),
];

/// Running system: `mu = ((33222),(41))`, `L = 24`, `n = 2`.
pub const RUNNING_CONTENT: &str = "((33222),(41))";
pub const RUNNING_LENGTH: usize = 24;

pub const EVOLUTION_START: &str = "321113211222111223331111";

/// `(T^(1)_3)^t` of [`EVOLUTION_START`] for `t = 0..9`.
pub const EVOLUTION_T13: [&str; 10] = [
    "321113211222111223331111",
    "113211132111222112213331",
    "331132111321111221122213",
    "213311332113211112211122",
    "122233111332132111122111",
    "111122332111321332111221",
    "211111221332113211332112",
    "122211112211332132111331",
    "311122211122111321332113",
    "133111122211221113211332",
];

/// `(T^(2)_4)^t` of [`EVOLUTION_START`] for `t = 0..9`.
pub const EVOLUTION_T24: [&str; 10] = [
    "321113211222111223331111",
    "132111321333111221112221",
    "112211132111222331113321",
    "213311113211322112211132",
    "221122111321133213311112",
    "331132111122111321122213",
    "112213221133111132132211",
    "113311222111221113213321",
    "211122333111321111221132",
    "221132111222132111331113",
];

/// `((r, l), N)` dynamical periods of the running system.
pub const RUNNING_PERIODS: [((usize, usize), u64); 7] =
    [((1, 1), 24), ((1, 2), 12), ((1, 3), 194), ((2, 1), 1164), ((2, 2), 776), ((2, 3), 582), ((2, 4), 2328)];

/// Highest paths of the running system with their rigging vectors (blocks color-major, riggings ascending).
pub const RUNNING_HIGHEST: [(&str, [i64; 7]); 4] = [
    ("111221113221132113311322", [2, 4, 1, 5, 6, 0, 0]),
    ("111221322111221332111331", [0, 1, 1, 3, 6, 2, 0]),
    ("112211132211321133113221", [1, 3, 0, 4, 5, 0, 0]),
    ("111222132111332113311122", [0, 2, 2, 6, 7, 0, 0]),
];

/// Initial value problem: start path and `((r, l), (T^(r)_l)^1000(start))`.
pub const IVP_START: &str = "211332111321133112221112";
pub const IVP_STEPS: i64 = 1000;
pub const IVP_RESULTS: [((usize, usize), &str); 6] = [
    ((1, 2), "122211122113321113211331"),
    ((1, 3), "213321112211112221331113"),
    ((2, 1), "331113211332112211111222"),
    ((2, 2), "311132113211122211221133"),
    ((2, 3), "113221132111221132213311"),
    ((2, 4), "221113221112211321333111"),
];
/// `(T^(1)_3)^1000` of [`EVOLUTION_START`].
pub const IVP_T13_OF_START: &str = "221132211331111321322111";

/// Small system `mu = ((211),(1))`, `L = 8`.
pub const SMALL_CONTENT: &str = "((211),(1))";
pub const SMALL_LENGTH: usize = 8;

/// `(riggings of blocks (1,1), (1,2), (2,1)), path` of the inverse KKR worked example.
pub const KKR_INVERSE_EXAMPLE: ([i64; 4], &str) = ([1, 1, 2, 0], "11213122");

/// The 40 highest paths of the small system with riggings `r11 r22 r21 r2` as printed.
pub const SMALL_HIGHEST: [(&str, &str); 40] = [
    ("11221123", "0331"),
    ("11231122", "1110"),
    ("12311221", "0000"),
    ("11221213", "0321"),
    ("12131122", "1100"),
    ("11122123", "1331"),
    ("11221231", "0221"),
    ("12311122", "1000"),
    ("11121223", "1321"),
    ("11212231", "0211"),
    ("11121232", "1221"),
    ("11212321", "0111"),
    ("11211232", "1211"),
    ("12112321", "0101"),
    ("11232112", "0310"),
    ("11212132", "1111"),
    ("12121321", "0001"),
    ("12132112", "0300"),
    ("12112132", "1101"),
    ("11213212", "1310"),
    ("12132121", "0200"),
    ("12121132", "1001"),
    ("12113212", "1300"),
    ("12113122", "1200"),
    ("11212213", "0311"),
    ("12112213", "0301"),
    ("11221312", "0330"),
    ("11211223", "1311"),
    ("12112231", "0201"),
    ("11223112", "0320"),
    ("12111223", "1301"),
    ("11122312", "1330"),
    ("11223121", "0220"),
    ("12111232", "1201"),
    ("11123212", "1320"),
    ("11232121", "0210"),
    ("11123122", "1220"),
    ("11231221", "0110"),
    ("12131221", "0100"),
    ("11213122", "1210"),
];

/// Rigging vector `[r11, r21, r22, r2]` (ascending within block (1,2)) of a printed `r11 r22 r21 r2` string.
pub fn small_rigging_vector(printed: &str) -> [i64; 4] {
    let d: Vec<i64> = printed.bytes().map(|b| (b - b'0') as i64).collect();
    [d[0], d[1].min(d[2]), d[1].max(d[2]), d[3]]
}

/// `n = 1`, `L = 45` system for time averages.
pub const AVERAGE_PATH: &str = "111222221111222222221111111111111112222111211";
/// `(l, <y>_l)` with `l = None` for infinity.
pub const AVERAGE_TABLE: [(Option<usize>, (i64, i64)); 9] = [
    (Some(1), (2, 5)),
    (Some(2), (147, 185)),
    (Some(3), (44, 37)),
    (Some(4), (293, 185)),
    (Some(5), (6646, 3515)),
    (Some(6), (1545, 703)),
    (Some(7), (8804, 3515)),
    (Some(8), (9883, 3515)),
    (None, (10962, 3515)),
];

/// `(a, l, <y_a>_l)` on [`EVOLUTION_START`] under `T^(1)_l`; `l = 3` saturates.
pub const RUNNING_AVERAGES: [(usize, usize, (i64, i64)); 6] =
    [(2, 1, (7, 24)), (2, 2, (7, 12)), (2, 3, (155, 194)), (3, 1, (5, 24)), (3, 2, (5, 12)), (3, 3, (109, 194))];

/// General case path: `(path, n, orbit size, inadmissible (r, l))`.
pub type GeneralCase = (&'static str, usize, u64, &'static [(usize, usize)]);

pub const GENERAL_CASES: [GeneralCase; 2] = [
    ("121212343434121212", 3, 72, &[(1, 2), (3, 1), (3, 2)]),
    ("1122331142233444", 3, 512, &[(2, 1), (2, 3)]),
];
