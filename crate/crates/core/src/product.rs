//! Product codes over a component code, and the square frames they live in.

use crate::component::ComponentCode;
use crate::eaed::{TernaryWord, Trit};
use crate::error::{Error, Result};

/// Square row-major matrix. Columns are read and written with a stride, so
/// writes through a column are visible to later row reads without copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

/// Binary `n x n` frame, one byte per bit.
pub type BitMatrix = Matrix<u8>;
/// Frame over `{0, ?, 1}`.
pub type TernaryFrame = Matrix<Trit>;

/// A row or a column of a square frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl Line {
    /// Flat row-major index of the `idx`-th entry along this line.
    #[inline]
    pub fn position(self, n: usize, idx: usize) -> usize {
        match self {
            Line::Row(i) => i * n + idx,
            Line::Col(j) => idx * n + j,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Line::Row(i) | Line::Col(i) => i,
        }
    }
}

impl<T: Copy> Matrix<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Self {
            n,
            data: vec![value; n * n],
        }
    }

    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                actual: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected_rows: n,
                    expected_cols: n,
                    rows: n,
                    cols: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.n + col] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                size: self.n,
            })
        }
    }

    /// Copies a row or column into `out` without bounds diagnostics.
    #[inline]
    pub fn read_line(&self, line: Line, out: &mut [T]) {
        match line {
            Line::Row(i) => out.copy_from_slice(self.row(i)),
            Line::Col(j) => {
                for (idx, slot) in out.iter_mut().enumerate() {
                    *slot = self.data[idx * self.n + j];
                }
            }
        }
    }

    #[inline]
    pub fn write_line(&mut self, line: Line, values: &[T]) {
        for (idx, &v) in values.iter().enumerate() {
            self.data[line.position(self.n, idx)] = v;
        }
    }

    pub fn line(&self, line: Line) -> Result<Vec<T>>
    where
        T: Default,
    {
        self.check(line.index())?;
        let mut out = vec![T::default(); self.n];
        self.read_line(line, &mut out);
        Ok(out)
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl TernaryFrame {
    pub fn from_bits(bits: &BitMatrix) -> Self {
        bits.map(Trit::from_bit)
    }

    pub fn row_view(&self, i: usize) -> Result<TernaryWord> {
        self.line(Line::Row(i)).map(TernaryWord)
    }

    pub fn col_view(&self, j: usize) -> Result<TernaryWord> {
        self.line(Line::Col(j)).map(TernaryWord)
    }

    /// Stores `word` into the given row or column.
    pub fn write_back(&mut self, line: Line, word: &TernaryWord) -> Result<()> {
        self.check(line.index())?;
        if word.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: word.len(),
            });
        }
        self.write_line(line, &word.0);
        Ok(())
    }

    pub fn erasure_count(&self) -> usize {
        self.data.iter().filter(|t| t.is_erased()).count()
    }

    /// Hard decisions with any residual erasure emitted as 0.
    pub fn hard_decision(&self) -> BitMatrix {
        self.map(|t| t.bit().unwrap_or(0))
    }
}

/// Product code whose rows and columns are all codewords of `component`.
#[derive(Clone, Debug)]
pub struct ProductCode {
    component: ComponentCode,
}

impl ProductCode {
    pub fn new(component: ComponentCode) -> Self {
        Self { component }
    }

    pub fn component(&self) -> &ComponentCode {
        &self.component
    }

    pub fn n(&self) -> usize {
        self.component.n()
    }

    pub fn k(&self) -> usize {
        self.component.k()
    }

    /// Code rate `k^2 / n^2`.
    pub fn rate(&self) -> f64 {
        let (n, k) = (self.n() as f64, self.k() as f64);
        (k * k) / (n * n)
    }

    /// Overhead `1/r - 1` in percent.
    pub fn overhead_percent(&self) -> f64 {
        100.0 * (1.0 / self.rate() - 1.0)
    }

    /// Number of systematic payload bits per frame, `k^2`.
    pub fn payload_bits(&self) -> usize {
        self.k() * self.k()
    }

    /// Encodes a `k x k` message given as `k` rows of `k` bits. The message
    /// occupies rows and columns `n-k..n` of the frame.
    pub fn encode(&self, message: &[Vec<u8>]) -> Result<BitMatrix> {
        let k = self.k();
        if message.len() != k || message.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch {
                expected_rows: k,
                expected_cols: k,
                rows: message.len(),
                cols: message.first().map_or(0, Vec::len),
            });
        }
        let flat: Vec<u8> = message.concat();
        self.encode_flat(&flat)
    }

    /// Like [`encode`](Self::encode) with the message flattened row-major.
    pub fn encode_flat(&self, message: &[u8]) -> Result<BitMatrix> {
        let (n, k) = (self.n(), self.k());
        if message.len() != k * k {
            return Err(Error::LengthMismatch {
                expected: k * k,
                actual: message.len(),
            });
        }
        let code = &self.component;
        let pl = n - k;
        let mut frame = BitMatrix::filled(n, 0);
        for i in 0..k {
            let row = &mut frame.data[(pl + i) * n..(pl + i + 1) * n];
            code.encode_into(&message[i * k..(i + 1) * k], row)?;
        }
        let mut col_msg = vec![0u8; k];
        let mut col = vec![0u8; n];
        for j in 0..n {
            for (i, slot) in col_msg.iter_mut().enumerate() {
                *slot = frame.data[(pl + i) * n + j];
            }
            code.encode_into(&col_msg, &mut col)?;
            frame.write_line(Line::Col(j), &col);
        }
        Ok(frame)
    }

    /// Row-major `k x k` payload extracted from a frame.
    pub fn payload<T: Copy>(&self, frame: &Matrix<T>) -> Vec<T> {
        let (n, k) = (self.n(), self.k());
        let pl = n - k;
        (0..k)
            .flat_map(|i| frame.row(pl + i)[pl..].iter().copied())
            .collect()
    }

    /// Whether every row and every column is a component codeword.
    pub fn is_codeword(&self, frame: &BitMatrix) -> bool {
        let n = self.n();
        let mut buf = vec![0u8; n];
        (0..n).all(|i| {
            frame.read_line(Line::Row(i), &mut buf);
            self.component.is_codeword(&buf)
        }) && (0..n).all(|j| {
            frame.read_line(Line::Col(j), &mut buf);
            self.component.is_codeword(&buf)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pc15() -> ProductCode {
        ProductCode::new(ComponentCode::bch(4, 2, false).unwrap())
    }

    #[test]
    fn zero_message_gives_zero_frame() {
        let pc = pc15();
        let frame = pc.encode(&vec![vec![0; 7]; 7]).unwrap();
        assert_eq!(frame, BitMatrix::filled(15, 0));
    }

    #[test]
    fn random_frames_have_codeword_rows_and_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for pc in [pc15(), ProductCode::new(ComponentCode::bch(7, 2, true).unwrap())] {
            for _ in 0..5 {
                let msg: Vec<u8> = (0..pc.payload_bits()).map(|_| rng.random_range(0..2)).collect();
                let frame = pc.encode_flat(&msg).unwrap();
                assert!(pc.is_codeword(&frame));
                assert_eq!(pc.payload(&frame), msg);
            }
        }
    }

    #[test]
    fn dimension_checks() {
        let pc = pc15();
        assert!(matches!(
            pc.encode(&vec![vec![0; 7]; 6]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(pc.encode_flat(&[0; 48]).is_err());
    }

    #[test]
    fn rate_of_127_112_even_weight_product() {
        let pc = ProductCode::new(ComponentCode::bch(7, 2, true).unwrap());
        assert_eq!((pc.n(), pc.k()), (127, 112));
        assert!((pc.rate() - 12544.0 / 16129.0).abs() < 1e-15);
        assert!((pc.rate() - 0.78).abs() < 0.005);
        assert_eq!(pc.overhead_percent().floor(), 28.0);
        let pc2 = ProductCode::new(ComponentCode::bch(8, 2, true).unwrap());
        assert_eq!((pc2.n(), pc2.k()), (255, 238));
        assert!((pc2.rate() - 0.87).abs() < 0.005);
    }

    #[test]
    fn views_and_write_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 6;
        let data: Vec<Trit> = (0..n * n)
            .map(|_| match rng.random_range(0..3) {
                0 => Trit::Zero,
                1 => Trit::One,
                _ => Trit::Erased,
            })
            .collect();
        let mut frame = TernaryFrame::from_vec(n, data).unwrap();
        let orig = frame.clone();
        for i in 0..n {
            let r = frame.row_view(i).unwrap();
            frame.write_back(Line::Row(i), &r).unwrap();
            let c = frame.col_view(i).unwrap();
            frame.write_back(Line::Col(i), &c).unwrap();
        }
        assert_eq!(frame, orig);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(frame.col_view(j).unwrap().0[i], frame.get(i, j));
            }
        }
        frame
            .write_back(Line::Row(2), &TernaryWord(vec![Trit::One; n]))
            .unwrap();
        for j in 0..n {
            assert_eq!(frame.col_view(j).unwrap().0[2], Trit::One);
        }
        assert_eq!(
            frame.row_view(n),
            Err(Error::IndexOutOfRange { index: n, size: n })
        );
        assert!(frame.write_back(Line::Col(n), &TernaryWord(vec![Trit::One; n])).is_err());
        assert!(frame.write_back(Line::Col(0), &TernaryWord(vec![Trit::One; 2])).is_err());
    }
}
