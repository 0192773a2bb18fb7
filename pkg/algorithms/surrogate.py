# File: algorithms/surrogate.py
# Small tanh MLP critic with analytic parameter and input gradients

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from utils.errors import DivergenceDetected

logger = logging.getLogger(__name__)


class Adam:
    """Adam on a list of numpy arrays, updated in place"""

    def __init__(self, params: List[np.ndarray], learning_rate: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: Sequence[np.ndarray], learning_rate: Optional[float] = None, ascend: bool = False):
        lr = self.learning_rate if learning_rate is None else learning_rate
        sign = 1.0 if ascend else -1.0
        self.t += 1
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.beta1
            m += (1 - self.beta1) * g
            v *= self.beta2
            v += (1 - self.beta2) * g * g
            m_hat = m / (1 - self.beta1 ** self.t)
            v_hat = v / (1 - self.beta2 ** self.t)
            p += sign * lr * m_hat / (np.sqrt(v_hat) + self.eps)


class SurrogateNet:
    """
    Fully connected critic: widths [d, h1, ..., 1], tanh on hidden layers,
    linear scalar output. Weights use Glorot-uniform initialization.
    """

    def __init__(self, widths: Sequence[int], rng: Optional[np.random.Generator] = None):
        widths = [int(w) for w in widths]
        if len(widths) < 2 or widths[-1] != 1 or any(w < 1 for w in widths):
            raise ValueError(f"widths must be [input, hidden..., 1], got {widths}")
        rng = rng if rng is not None else np.random.default_rng(0)
        self.widths = widths
        self.weights: List[np.ndarray] = []
        self.biases: List[np.ndarray] = []
        for fan_in, fan_out in zip(widths[:-1], widths[1:]):
            limit = math.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))

    @property
    def params(self) -> List[np.ndarray]:
        return self.weights + self.biases

    def _forward(self, X: np.ndarray) -> List[np.ndarray]:
        activations = [X]
        h = X
        last = len(self.weights) - 1
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ W + b
            h = z if i == last else np.tanh(z)
            activations.append(h)
        return activations

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return self._forward(X)[-1][:, 0]

    def _backward(self, activations: List[np.ndarray], upstream: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:
        """Gradients of sum(upstream * output) w.r.t. weights, biases and inputs"""
        g = upstream.reshape(-1, 1)
        grad_w: List[np.ndarray] = [None] * len(self.weights)
        grad_b: List[np.ndarray] = [None] * len(self.biases)
        for i in range(len(self.weights) - 1, -1, -1):
            if i < len(self.weights) - 1:
                g = g * (1.0 - activations[i + 1] ** 2)
            grad_w[i] = activations[i].T @ g
            grad_b[i] = g.sum(axis=0)
            g = g @ self.weights[i].T
        return grad_w, grad_b, g

    def input_gradient(self, X: np.ndarray) -> np.ndarray:
        """dQ/dx for each row of X (or for a single point)"""
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X2 = np.atleast_2d(X)
        activations = self._forward(X2)
        _, _, gx = self._backward(activations, np.ones(len(X2)))
        return gx[0] if single else gx

    def loss_and_grads(self, X: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        activations = self._forward(X)
        residual = activations[-1][:, 0] - y
        loss = float(np.mean(residual ** 2))
        grad_w, grad_b, _ = self._backward(activations, 2.0 * residual / len(y))
        return loss, grad_w + grad_b

    def fit(self, X: np.ndarray, y: np.ndarray, optimizer: Adam, steps: int) -> float:
        """Run `steps` optimizer updates on the squared error; returns the last loss"""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        y = np.asarray(y, dtype=np.float64)
        loss = float("nan")
        for _ in range(steps):
            loss, grads = self.loss_and_grads(X, y)
            if not math.isfinite(loss):
                raise DivergenceDetected(f"critic loss became non-finite ({loss})")
            optimizer.step(grads)
        return loss
