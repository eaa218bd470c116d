//! Stable check identifiers.

pub const BALOG_SCALAR: &str = "balog.scalar";
pub const BALOG_SCALAR_SHIFTED: &str = "balog.scalar_two_dilates";
pub const BALOG_PLANAR: &str = "balog.planar";

pub const RATIO_PLUS_SET: &str = "growth.ratio_plus_set";
pub const PRODUCT_PLUS_SET: &str = "growth.product_plus_set";
pub const PRODUCT_PLUS_SET_ENERGY: &str = "growth.product_plus_set_energy";
pub const RATIO_PLUS_RATIO: &str = "growth.ratio_plus_ratio";
pub const PRODUCT_PLUS_PRODUCT: &str = "growth.product_plus_product";

pub const SZT_LEVEL_SETS: &str = "szt.level_sets";
pub const SZT_ENERGY_HOLDER: &str = "szt.energy_cubed";
pub const SZT_ENERGY: &str = "szt.energy";
pub const SZT_TRIPLE: &str = "szt.triple_correlation";
pub const SZT_PAIR_SUMSET: &str = "szt.pair_sumset";

pub const MIXED_FOURTH_ENERGY: &str = "mixed.fourth_power_energy";
pub const MIXED_SQUARE_ENERGY: &str = "mixed.square_energy";
pub const MIXED_FOURTH_DIFFERENCE: &str = "mixed.fourth_power_difference";
pub const MIXED_SQUARE_DIFFERENCE: &str = "mixed.square_difference";

pub const ENERGY_VS_PRODUCT_SUMSET: &str = "energy.additive_vs_product_sumset";
pub const ENERGY_THREE_HALVES: &str = "energy.three_halves_mixed";

pub const KATZ_KOESTER: &str = "katz_koester.inclusion";
pub const RNZ_COROLLARY: &str = "rnz.corollary";
pub const TAU_COUNT: &str = "solymosi.tau_count";
pub const SOLYMOSI_ENERGY: &str = "solymosi.energy";
pub const PETRIDIS: &str = "petridis";
pub const RUZSA_TRIANGLE: &str = "ruzsa_triangle";

pub const CHAIN_RATIO_PLUS_SET: &str = "chain.ratio_plus_set";
pub const CHAIN_PRODUCT_PLUS_SET: &str = "chain.product_plus_set";
pub const CHAIN_RATIO_PLUS_RATIO: &str = "chain.ratio_plus_ratio";
pub const CHAIN_PRODUCT_PLUS_PRODUCT: &str = "chain.product_plus_product";
pub const D_PRODUCT_BOUND: &str = "d_bound.product_set";
