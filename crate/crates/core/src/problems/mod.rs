//! Test problems: MatrixMarket input, seeded random problems, blur
//! operators, the stacked formulation, images and quality metrics.

mod blur;
mod dump;
mod generate;
mod image;
mod matrix_market;
mod stacking;

pub use blur::{
    kronecker, multichannel_blur, standard_multichannel_a1, toeplitz_gaussian, toeplitz_uniform, BlurKind,
    BlurSpec,
};
pub use dump::{qmatrix_from_csv, qmatrix_to_csv, read_qmatrix_csv, write_qmatrix_csv};
pub use generate::{
    build_test_problem, planted_sylvester, random_dense_operator, random_dense_problem, random_quaternion, rng,
    scaled_components, sylvester_b, sylvester_problem, tridiagonal_b0, uniform_matrix, uniform_qmatrix,
    PlantedSylvester, EXAMPLE_A_COEFFS, EXAMPLE_B_COEFFS, RNG_ALGORITHM,
};
pub use image::{
    image_read, image_write, metrics, psnr, rr, ssim, synthetic_image, Metrics, QuatImage, DYNAMIC_RANGE,
};
pub use matrix_market::{
    parse_matrix_market, parse_matrix_market_str, read_matrix_market, write_matrix_market, MatrixMarketFile,
    MmFormat, MmSymmetry,
};
pub use stacking::{stack, stack_columns, unstack, StackedOperator};
