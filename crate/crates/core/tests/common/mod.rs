#![allow(dead_code)]

use std::io::Write;
use std::path::PathBuf;

use volfit::{DistributionSpec, Family};

/// Fitted parameter rows for the variance, index and difference tables.
pub const TABLE_ROWS: &[(&str, Family, &[f64])] = &[
    // RV² 1970-2017
    ("rv2-7017", Family::S, &[0.9686, 1.0, 84.0679, 175.8546]),
    ("rv2-7017", Family::GB2, &[15.9183, 1.8735, 1.0150, 23.7045]),
    ("rv2-7017", Family::BP, &[17.2160, 1.9116, 21.9595]),
    ("rv2-7017", Family::GIGa, &[2.5562, 625.4491, 0.8023]),
    ("rv2-7017", Family::IGa, &[1.7394, 319.7392]),
    ("rv2-7017", Family::GGa, &[5.0882, 11.1902, 0.4812]),
    ("rv2-7017", Family::Ga, &[1.1391, 364.0363]),
    // RV² 1990-2017
    ("rv2-9017", Family::S, &[0.9033, 1.0, 91.7350, 168.7239]),
    ("rv2-9017", Family::GB2, &[14.1895, 3.1115, 0.6613, 15.6843]),
    ("rv2-9017", Family::BP, &[16.2164, 1.8349, 16.19619]),
    ("rv2-9017", Family::GIGa, &[3.8505, 2195.2527, 0.5631]),
    ("rv2-9017", Family::IGa, &[1.4149, 245.5728]),
    ("rv2-9017", Family::GGa, &[4.2662, 17.0561, 0.4900]),
    ("rv2-9017", Family::Ga, &[1.0295, 436.8326]),
    // VIX²
    ("vix2", Family::S, &[0.9548, 1.0, 92.1996, 234.4670]),
    ("vix2", Family::GB2, &[63.3797, 1.3249, 1.4751, 18.1068]),
    ("vix2", Family::BP, &[44.1482, 2.6245, 16.1142]),
    ("vix2", Family::GIGa, &[1.4520, 325.9344, 1.3814]),
    ("vix2", Family::IGa, &[2.5156, 667.9832]),
    ("vix2", Family::GGa, &[6.8529, 3.1634, 1.0607]),
    ("vix2", Family::Ga, &[1.8988, 230.0093]),
    // VXO²
    ("vxo2", Family::S, &[0.9554, 1.0, 104.3782, 232.7193]),
    ("vxo2", Family::GB2, &[58.4930, 2.6432, 0.8839, 8.1216]),
    ("vxo2", Family::BP, &[44.1507, 2.1309, 12.5195]),
    ("vxo2", Family::GIGa, &[3.0721, 1092.4445, 0.7954]),
    ("vxo2", Family::IGa, &[2.0448, 519.0907]),
    ("vxo2", Family::GGa, &[5.599, 16.0437, 0.5327]),
    ("vxo2", Family::Ga, &[1.6328, 283.4215]),
    // VIX² - scaled RV²
    ("vix2-rv2", Family::N, &[63.2773, 131.8926]),
    ("vix2-rv2", Family::GST, &[73.8714, 92.4056, 1.3310]),
    ("vix2-rv2", Family::GCHU, &[1.7775, 0.7367, 71.2039, 72.3703]),
    ("vix2-rv2", Family::S, &[1.1842, -0.1503, 86.5044, 77.5295]),
    // VXO² - scaled RV²
    ("vxo2-rv2", Family::N, &[60.6005, 139.6113]),
    ("vxo2-rv2", Family::GST, &[66.1158, 103.6974, 1.3909]),
    ("vxo2-rv2", Family::GCHU, &[8.3382, 0.7080, 31.2797, 65.7904]),
    ("vxo2-rv2", Family::S, &[1.2111, -0.0899, 95.8820, 69.2693]),
    // RV 1970-2017
    ("rv-7017", Family::S, &[1.3278, 1.0, 3.4936, 13.8773]),
    ("rv-7017", Family::GB2, &[15.8782, 1.8724, 2.0309, 4.8757]),
    ("rv-7017", Family::BP, &[27.1723, 6.7415, 4.001]),
    ("rv-7017", Family::GIGa, &[2.5562, 25.0090, 1.6047]),
    ("rv-7017", Family::IGa, &[6.0553, 88.2509]),
    ("rv-7017", Family::GGa, &[6.0715, 2.3493, 0.9052]),
    ("rv-7017", Family::Ga, &[4.8790, 3.6151]),
    // RV 1990-2017
    ("rv-9017", Family::S, &[1.2849, 1.0, 3.9402, 13.7767]),
    ("rv-9017", Family::GB2, &[17.6690, 2.4125, 1.5731, 4.1218]),
    ("rv-9017", Family::BP, &[21.8899, 6.1274, 4.2232]),
    ("rv-9017", Family::GIGa, &[3.5363, 40.8574, 1.1920]),
    ("rv-9017", Family::IGa, &[4.8913, 70.5571]),
    ("rv-9017", Family::GGa, &[4.3867, 3.9442, 0.9731]),
    ("rv-9017", Family::Ga, &[4.1254, 4.4086]),
    // VIX
    ("vix", Family::S, &[1.2901, 1.0, 3.3182, 15.9886]),
    ("vix", Family::GB2, &[63.0279, 1.3326, 2.9404, 4.2422]),
    ("vix", Family::BP, &[44.8997, 10.8471, 4.2232]),
    ("vix", Family::GIGa, &[1.4520, 18.0537, 2.7628]),
    ("vix", Family::IGa, &[8.9387, 152.9579]),
    ("vix", Family::GGa, &[6.7354, 10.0120, 0.5250]),
    ("vix", Family::Ga, &[7.7138, 2.5092]),
    // VXO
    ("vxo", Family::S, &[1.3267, 1.0, 3.8227, 16.0853]),
    ("vxo", Family::GB2, &[53.3880, 2.6150, 1.7816, 3.0120]),
    ("vxo", Family::BP, &[36.5647, 8.8725, 4.2232]),
    ("vxo", Family::GIGa, &[3.0721, 33.0522, 1.5909]),
    ("vxo", Family::IGa, &[7.2686, 123.1749]),
    ("vxo", Family::GGa, &[5.5107, 3.9062, 1.0601]),
    ("vxo", Family::Ga, &[6.4518, 3.0512]),
    // VIX - scaled RV
    ("vix-rv", Family::N, &[0.4791, 3.8945]),
    ("vix-rv", Family::GST, &[0.9680, 3.1944, 2.6948]),
    ("vix-rv", Family::GCHU, &[3.1107, 2.1, 3.0969, 0.9445]),
    ("vix-rv", Family::S, &[1.5807, -0.8377, 2.6247, 1.4591]),
    // VXO - scaled RV
    ("vxo-rv", Family::N, &[0.4412, 3.8358]),
    ("vxo-rv", Family::GST, &[0.8367, 3.2302, 2.8099]),
    ("vxo-rv", Family::GCHU, &[2.8284, 2.1, 3.2574, 0.8439]),
    ("vxo-rv", Family::S, &[1.6068, -0.7346, 2.6689, 1.2449]),
];

pub fn spec(family: Family, params: &[f64]) -> DistributionSpec {
    DistributionSpec::new(family, params.to_vec()).unwrap()
}

pub fn row(table: &str, family: Family) -> DistributionSpec {
    let (_, f, p) = TABLE_ROWS
        .iter()
        .find(|(t, f, _)| *t == table && *f == family)
        .unwrap_or_else(|| panic!("no {family} row in {table}"));
    spec(*f, p)
}

/// Directory holding `sp500.csv`, `vix.csv` and `vxo.csv`, if configured.
pub fn data_dir() -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os("VOLFIT_DATA_DIR")?);
    let complete = ["sp500.csv", "vix.csv", "vxo.csv"]
        .iter()
        .all(|f| dir.join(f).is_file());
    complete.then_some(dir)
}

pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

/// Prints one result line straight to stderr so it shows without `--nocapture`.
pub fn report(id: u32, title: &str, verdict: Verdict, detail: &str) {
    let tag = match verdict {
        Verdict::Pass => "PASS",
        Verdict::Fail => "FAIL",
        Verdict::Skip => "SKIP",
    };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "[acceptance {id}] {tag} {title}: {detail}");
}

pub fn verdict(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}
