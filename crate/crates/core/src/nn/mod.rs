//! Minimal neural network core: dense and same-padded convolution layers,
//! ReLU/sigmoid, MSE/XENT, SGD/Adam and a binary model format.

mod model_file;
mod network;
mod tensor;

pub use model_file::{load_model, model_from_bytes, model_to_bytes, save_model, Metadata, FORMAT_VERSION};
pub use network::{
    grad_check, param_count, relative_error, Activation, Cache, Gradients, LayerParams, LayerSpec, Loss, Network,
    NetworkConfig, OptimizerSpec, Target, GRAD_CHECK_FLOOR,
};
pub use tensor::{conv2d_same, gemm, Scalar, Tensor};
