use std::fmt::{Debug, Display};

use num_traits::{Float, NumCast};

use crate::error::{Error, Result};

/// Floating point element type of the network core.
///
/// Training and play run in `f32`; gradient checks and the convolution
/// reference tests run the same code in `f64`.
pub trait Scalar: Float + NumCast + Default + Debug + Display + Send + Sync + 'static {
    /// # Safety
    /// Same contract as `matrixmultiply::sgemm`/`dgemm`.
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    );

    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite")
    }
}

impl Scalar for f32 {
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        alpha: f32,
        a: *const f32,
        rsa: isize,
        csa: isize,
        b: *const f32,
        rsb: isize,
        csb: isize,
        beta: f32,
        c: *mut f32,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::sgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

impl Scalar for f64 {
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        alpha: f64,
        a: *const f64,
        rsa: isize,
        csa: isize,
        b: *const f64,
        rsb: isize,
        csb: isize,
        beta: f64,
        c: *mut f64,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

/// `c = op(a) · op(b) + beta · c` for row-major matrices, where `op(a)` is
/// `m × k` and `op(b)` is `k × n`. A transposed operand is stored in its
/// untransposed row-major layout.
#[allow(clippy::too_many_arguments)]
pub fn gemm<T: Scalar>(m: usize, k: usize, n: usize, a: &[T], trans_a: bool, b: &[T], trans_b: bool, beta: T, c: &mut [T]) {
    assert_eq!(a.len(), m * k);
    assert_eq!(b.len(), k * n);
    assert_eq!(c.len(), m * n);
    if m == 0 || n == 0 {
        return;
    }
    let (rsa, csa) = if trans_a { (1, m as isize) } else { (k as isize, 1) };
    let (rsb, csb) = if trans_b { (1, k as isize) } else { (n as isize, 1) };
    // SAFETY: the asserted lengths cover every index the strides reach.
    unsafe {
        T::gemm_raw(m, k, n, T::one(), a.as_ptr(), rsa, csa, b.as_ptr(), rsb, csb, beta, c.as_mut_ptr(), n as isize, 1);
    }
}

/// Dense row-major tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T = f32> {
    shape: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> Tensor<T> {
    pub fn new(shape: Vec<usize>, data: Vec<T>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::Shape(format!("zero-sized dimension in {shape:?}")));
        }
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(Error::Shape(format!("shape {shape:?} needs {n} values, got {}", data.len())));
        }
        Ok(Self { shape, data })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Self { shape, data: vec![T::zero(); n] }
    }

    pub fn filled(shape: Vec<usize>, value: T) -> Self {
        let n = shape.iter().product();
        Self { shape, data: vec![value; n] }
    }

    pub fn from_vec(data: Vec<T>) -> Self {
        Self { shape: vec![data.len()], data }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn reshape(mut self, shape: Vec<usize>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n != self.data.len() {
            return Err(Error::Shape(format!("cannot reshape {:?} into {shape:?}", self.shape)));
        }
        self.shape = shape;
        Ok(self)
    }

    pub fn cast<U: Scalar>(&self) -> Tensor<U> {
        Tensor { shape: self.shape.clone(), data: self.data.iter().map(|&x| U::of(x.as_f64())).collect() }
    }
}

/// Unrolls same-padded `kh × kw` patches of a `[c, h, w]` input into a
/// `[c·kh·kw, h·w]` matrix.
pub(crate) fn im2col<T: Scalar>(input: &[T], c: usize, h: usize, w: usize, kh: usize, kw: usize) -> Vec<T> {
    let (ph, pw) = (kh / 2, kw / 2);
    let hw = h * w;
    let mut cols = vec![T::zero(); c * kh * kw * hw];
    for ci in 0..c {
        let plane = &input[ci * hw..(ci + 1) * hw];
        for ky in 0..kh {
            for kx in 0..kw {
                let row = (ci * kh + ky) * kw + kx;
                let dst = &mut cols[row * hw..(row + 1) * hw];
                for y in 0..h {
                    let sy = y as isize + ky as isize - ph as isize;
                    if sy < 0 || sy >= h as isize {
                        continue;
                    }
                    let src = &plane[sy as usize * w..(sy as usize + 1) * w];
                    for x in 0..w {
                        let sx = x as isize + kx as isize - pw as isize;
                        if sx >= 0 && sx < w as isize {
                            dst[y * w + x] = src[sx as usize];
                        }
                    }
                }
            }
        }
    }
    cols
}

/// Adjoint of [`im2col`]: accumulates column gradients back onto the input.
pub(crate) fn col2im<T: Scalar>(cols: &[T], c: usize, h: usize, w: usize, kh: usize, kw: usize) -> Vec<T> {
    let (ph, pw) = (kh / 2, kw / 2);
    let hw = h * w;
    let mut out = vec![T::zero(); c * hw];
    for ci in 0..c {
        for ky in 0..kh {
            for kx in 0..kw {
                let row = (ci * kh + ky) * kw + kx;
                let src = &cols[row * hw..(row + 1) * hw];
                for y in 0..h {
                    let sy = y as isize + ky as isize - ph as isize;
                    if sy < 0 || sy >= h as isize {
                        continue;
                    }
                    for x in 0..w {
                        let sx = x as isize + kx as isize - pw as isize;
                        if sx >= 0 && sx < w as isize {
                            let o = &mut out[ci * hw + sy as usize * w + sx as usize];
                            *o = *o + src[y * w + x];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Zero-padded stride-1 cross-correlation that keeps the spatial size.
///
/// `input` is `[c, h, w]`, `filters` is `[f, c, kh, kw]`, `bias` has `f`
/// entries; the result is `[f, h, w]`.
pub fn conv2d_same<T: Scalar>(input: &Tensor<T>, filters: &Tensor<T>, bias: &[T]) -> Result<Tensor<T>> {
    let [c, h, w] = input.shape()[..] else {
        return Err(Error::Shape(format!("conv input must be [c,h,w], got {:?}", input.shape())));
    };
    let [f, fc, kh, kw] = filters.shape()[..] else {
        return Err(Error::Shape(format!("filters must be [f,c,kh,kw], got {:?}", filters.shape())));
    };
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::UnsupportedKernel(kh, kw));
    }
    if fc != c || bias.len() != f {
        return Err(Error::Shape(format!("filters {:?} / bias {} do not fit input {:?}", filters.shape(), bias.len(), input.shape())));
    }
    let cols = im2col(input.data(), c, h, w, kh, kw);
    let out = conv_from_cols(&cols, filters.data(), bias, f, c * kh * kw, h * w);
    Tensor::new(vec![f, h, w], out)
}

pub(crate) fn conv_from_cols<T: Scalar>(cols: &[T], weights: &[T], bias: &[T], f: usize, ck: usize, hw: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(f * hw);
    for &b in bias {
        out.extend(std::iter::repeat_n(b, hw));
    }
    gemm(f, ck, hw, weights, false, cols, false, T::one(), &mut out);
    out
}
