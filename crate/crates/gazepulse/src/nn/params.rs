//! Trainable parameters and the visitor used by the optimizer, the
//! checkpoint format, and parameter counting.

use ndarray::{ArrayD, ArrayView2, ArrayViewMut2, IxDyn};

/// One named trainable tensor with its gradient accumulator.
#[derive(Debug, Clone)]
pub struct Param {
    pub name: String,
    pub value: ArrayD<f64>,
    pub grad: ArrayD<f64>,
}

impl Param {
    pub fn new(name: impl Into<String>, value: ArrayD<f64>) -> Self {
        let grad = ArrayD::zeros(value.raw_dim());
        Self {
            name: name.into(),
            value,
            grad,
        }
    }

    pub fn zeros(name: impl Into<String>, shape: &[usize]) -> Self {
        Self::new(name, ArrayD::zeros(IxDyn(shape)))
    }

    pub fn len(&self) -> usize {
        self.value.len()
    }

    pub fn is_empty(&self) -> bool {
        self.value.is_empty()
    }

    pub fn zero_grad(&mut self) {
        self.grad.fill(0.0);
    }

    /// 2-D view of the value (weights are stored contiguously).
    pub fn value2(&self, rows: usize, cols: usize) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((rows, cols), self.value.as_slice().expect("contiguous"))
            .expect("param reshape")
    }

    pub fn grad2_mut(&mut self, rows: usize, cols: usize) -> ArrayViewMut2<'_, f64> {
        ArrayViewMut2::from_shape((rows, cols), self.grad.as_slice_mut().expect("contiguous"))
            .expect("param reshape")
    }
}

/// Visitor over every parameter of a module tree, in a stable order.
pub trait Visit {
    fn visit_params(&mut self, f: &mut dyn FnMut(&mut Param));
}

/// Total trainable scalar count.
pub fn count_params<M: Visit>(m: &mut M) -> usize {
    let mut n = 0;
    m.visit_params(&mut |p| n += p.len());
    n
}

/// Zero every gradient accumulator.
pub fn zero_grads<M: Visit>(m: &mut M) {
    m.visit_params(&mut |p| p.zero_grad());
}

/// Snapshot all parameter values keyed by name.
pub fn export_params<M: Visit>(m: &mut M) -> Vec<(String, Vec<usize>, Vec<f64>)> {
    let mut out = Vec::new();
    m.visit_params(&mut |p| {
        out.push((
            p.name.clone(),
            p.value.shape().to_vec(),
            p.value.as_slice().expect("contiguous").to_vec(),
        ));
    });
    out
}

/// Load parameter values by name; errors on mismatch.
pub fn import_params<M: Visit>(
    m: &mut M,
    values: &std::collections::BTreeMap<String, (Vec<usize>, Vec<f64>)>,
) -> crate::Result<()> {
    let mut err = None;
    let mut seen = 0usize;
    m.visit_params(&mut |p| {
        if err.is_some() {
            return;
        }
        match values.get(&p.name) {
            Some((shape, data)) if shape.as_slice() == p.value.shape() => {
                p.value
                    .as_slice_mut()
                    .expect("contiguous")
                    .copy_from_slice(data);
                seen += 1;
            }
            Some((shape, _)) => {
                err = Some(crate::Error::Checkpoint(format!(
                    "shape mismatch for {}: checkpoint {shape:?} vs model {:?}",
                    p.name,
                    p.value.shape()
                )));
            }
            None => {
                err = Some(crate::Error::Checkpoint(format!(
                    "missing parameter {} in checkpoint",
                    p.name
                )));
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    if seen != values.len() {
        return Err(crate::Error::Checkpoint(format!(
            "checkpoint has {} tensors, model consumed {seen}",
            values.len()
        )));
    }
    Ok(())
}
