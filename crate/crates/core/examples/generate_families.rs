//! One instance from each generator family, printed in the system text
//! format.

use boxsolve::generators::{
    constructed_orbit, gen_flash, gen_kuramoto, gen_orbit, gen_robot, gen_stewart, max_residual, FlashConfig, FlashParams,
    KuramotoParams, RobotMode, RobotParams, StewartParams,
};

const FLASH_CONFIG: &str = r#"
[[component]]
name = "ethanol"
psat = { a = 5.24677, b = 1598.673, c = -46.424 }
h_liquid = [-33483.8, 112.3]
h_vapor = [5076.2, 112.3]

[[component]]
name = "water"
psat = { a = 5.0768, b = 1659.793, c = -45.854 }
h_liquid = [-22450.7, 75.3]
h_vapor = [18209.3, 75.3]

[inputs]
dp = 0.1
pF = 1.0
xF1 = 0.3
FF = 1.0
"#;

fn main() {
    for mode in ["planar-trig", "planar-poly", "spatial-trig", "spatial-poly"] {
        let inst = gen_robot(&RobotParams::new(3, mode.parse::<RobotMode>().unwrap(), 1)).unwrap();
        let w = inst.witness.as_deref().unwrap();
        println!("{} ({} vars, witness residual {:.1e})", inst.system.name(), inst.system.dim(), max_residual(&inst.system, w));
    }

    let k = gen_kuramoto(&KuramotoParams::new(4, 0)).unwrap();
    println!("{}", k.system.to_text());

    let s = gen_stewart(&StewartParams::sample(0)).unwrap();
    println!("{}: {} equations", s.system.name(), s.system.equations().len());

    // The flash unit needs property correlations for its two components.
    let cfg = FlashConfig::from_toml(FLASH_CONFIG).unwrap();
    let f = gen_flash(&FlashParams::from_config(&cfg)).unwrap();
    println!("{}: {} equations", f.system.name(), f.system.equations().len());

    let c = constructed_orbit(0);
    let o = gen_orbit(&c.params).unwrap();
    println!(
        "{}: ellipse with semi-latus {:.3}, eccentricity {:.3}, residual at the construction {:.1e}",
        o.system.name(),
        c.semi_latus,
        c.eccentricity,
        max_residual(&o.system, &c.root)
    );
}
