import math

import pytest
import torch
from hypothesis import given, settings
from hypothesis import strategies as st

from molshift.styleflow import (
    VARIANCE_FLOOR,
    FlowChain,
    FlowStep,
    StylePrior,
    TooFewInstances,
    batch_prior,
    gaussian_log_density,
    iaf_step,
    sample_style,
)


def saturate_gates(chain, phi_bias=50.0):
    """Force every gate to sigma == 1 so each step is the identity."""
    for step in chain.steps:
        with torch.no_grad():
            step.lin2.weight.zero_()
            step.lin2.bias.zero_()
            step.lin2.bias[step.d :] = phi_bias
    return chain


class TestBatchPrior:
    def test_identical_instances_hit_variance_floor(self):
        latents = torch.ones(5, 8) * 3.0
        prior = batch_prior(latents)
        assert torch.allclose(prior.mu0, torch.full((8,), 3.0))
        assert torch.allclose(prior.var0, torch.full((8,), VARIANCE_FLOOR))

    def test_two_instances_unbiased_variance(self):
        latents = torch.stack([torch.zeros(4), torch.full((4,), 2.0)])
        prior = batch_prior(latents)
        assert torch.allclose(prior.mu0, torch.ones(4))
        assert torch.allclose(prior.var0, torch.full((4,), 2.0))

    def test_matches_brute_force(self):
        g = torch.Generator().manual_seed(11)
        latents = torch.randn(10, 6, generator=g, dtype=torch.float64) * 4
        prior = batch_prior(latents)
        k = len(latents)
        mean = sum(latents[i] for i in range(k)) / k
        var = sum((latents[i] - mean) ** 2 for i in range(k)) / (k - 1)
        assert torch.allclose(prior.mu0, mean, atol=1e-12)
        assert torch.allclose(prior.var0, var, atol=1e-12)

    def test_single_instance_rejected(self):
        with pytest.raises(TooFewInstances):
            batch_prior(torch.ones(1, 4))

    def test_gaussian_log_density_standard_normal(self):
        prior = StylePrior(mu0=torch.zeros(3), var0=torch.ones(3), k=2)
        ld = gaussian_log_density(torch.zeros(1, 3), prior)
        assert ld.item() == pytest.approx(-1.5 * math.log(2 * math.pi))


class TestConditioner:
    def test_zero_weights_give_output_bias(self):
        chain = FlowChain(d=6, n_steps=1)
        with torch.no_grad():
            for lin in (chain.conditioner[0], chain.conditioner[2]):
                lin.weight.zero_()
            chain.conditioner[0].bias.zero_()
        c = chain.condition(torch.randn(6))
        assert torch.allclose(c, chain.conditioner[2].bias)

    def test_finite_difference_gradient(self):
        torch.manual_seed(0)
        chain = FlowChain(d=4, n_steps=1, conditioner_hidden=8).double()
        mu0 = torch.randn(4, dtype=torch.float64)
        loss = chain.condition(mu0).pow(2).sum()
        loss.backward()
        w = chain.conditioner[0].weight
        eps = 1e-6
        for idx in [(0, 0), (3, 2), (7, 3)]:
            with torch.no_grad():
                w[idx] += eps
                up = chain.condition(mu0).pow(2).sum().item()
                w[idx] -= 2 * eps
                down = chain.condition(mu0).pow(2).sum().item()
                w[idx] += eps
            fd = (up - down) / (2 * eps)
            assert fd == pytest.approx(w.grad[idx].item(), rel=1e-3)


class TestIafStep:
    def test_saturated_gate_is_identity(self):
        chain = saturate_gates(FlowChain(d=5, n_steps=1))
        z = torch.randn(3, 5)
        z_next, logdet, sigma = iaf_step(z, torch.zeros(3, 5), chain.steps[0])
        assert torch.equal(z_next, z)
        assert torch.equal(logdet, torch.zeros(3))
        assert torch.all(sigma == 1.0)

    def test_half_open_gate_logdet(self):
        # phi == 0 everywhere -> sigma == 0.5 -> logdet = 4 ln(1/2)
        chain = FlowChain(d=4, n_steps=1)
        with torch.no_grad():
            chain.steps[0].lin2.weight.zero_()
            chain.steps[0].lin2.bias.zero_()
        z = torch.randn(1, 4)
        _, logdet, _ = iaf_step(z, torch.zeros(1, 4), chain.steps[0])
        assert logdet.item() == pytest.approx(4 * math.log(0.5), abs=1e-6)
        assert logdet.item() == pytest.approx(-2.7726, abs=1e-4)

    @pytest.mark.parametrize("d", [2, 5, 8])
    def test_jacobian_lower_triangular_with_sigma_diagonal(self, d):
        torch.manual_seed(d)
        step = FlowStep(d, hidden=32, context_dim=d).double()
        z = torch.randn(d, dtype=torch.float64)
        c = torch.randn(d, dtype=torch.float64)
        _, _, sigma = iaf_step(z, c, step)
        eps = 1e-6
        jac = torch.zeros(d, d, dtype=torch.float64)
        for j in range(d):
            zp = z.clone()
            zp[j] += eps
            zm = z.clone()
            zm[j] -= eps
            up, _, _ = iaf_step(zp, c, step)
            down, _, _ = iaf_step(zm, c, step)
            jac[:, j] = (up - down) / (2 * eps)
        for i in range(d):
            for j in range(d):
                if j > i:
                    assert abs(jac[i, j].item()) < 1e-9
                elif j == i:
                    assert jac[i, i].item() == pytest.approx(
                        sigma[i].item(), abs=1e-4
                    )

    def test_logdet_negative_for_unsaturated_gates(self):
        torch.manual_seed(3)
        chain = FlowChain(d=8, n_steps=6)
        z = torch.randn(4, 8)
        result = chain.forward(z, torch.zeros(4, 8))
        assert torch.all(result.logdet < 0)


class TestMasking:
    @settings(max_examples=40, deadline=None)
    @given(
        d=st.integers(min_value=2, max_value=10),
        j=st.data(),
        seed=st.integers(min_value=0, max_value=2**16),
    )
    def test_outputs_up_to_j_ignore_input_j(self, d, j, seed):
        j = j.draw(st.integers(min_value=0, max_value=d - 1))
        torch.manual_seed(seed)
        step = FlowStep(d, hidden=24, context_dim=3)
        z = torch.randn(d)
        c = torch.randn(3)
        eps_a, phi_a = step(z, c)
        z2 = z.clone()
        z2[j] += 1.7
        eps_b, phi_b = step(z2, c)
        assert torch.equal(eps_a[: j + 1], eps_b[: j + 1])
        assert torch.equal(phi_a[: j + 1], phi_b[: j + 1])

    def test_context_reaches_every_output(self):
        torch.manual_seed(1)
        step = FlowStep(4, hidden=32, context_dim=4)
        z = torch.randn(4)
        eps_a, phi_a = step(z, torch.zeros(4))
        eps_b, phi_b = step(z, torch.ones(4))
        assert not torch.equal(eps_a, eps_b)
        assert not torch.equal(phi_a[:1], phi_b[:1])  # even dim 0 sees c


class TestChain:
    @pytest.mark.parametrize("d", [3, 16])
    def test_invertibility(self, d):
        torch.manual_seed(d)
        chain = FlowChain(d=d, n_steps=6, hidden=32).double()
        z0 = torch.randn(5, d, dtype=torch.float64)
        c = torch.randn(d, dtype=torch.float64).expand(5, -1)
        result = chain.forward(z0, c)
        recovered = chain.invert(result.z, c)
        assert (recovered - z0).abs().max().item() <= 1e-5

    def test_forward_logdet_matches_sigma_trace(self):
        torch.manual_seed(7)
        chain = FlowChain(d=6, n_steps=4)
        z0 = torch.randn(2, 6)
        c = torch.randn(2, 6)
        result = chain.forward(z0, c)
        recomputed = sum(torch.log(s).sum(dim=-1) for s in result.sigmas)
        assert torch.allclose(result.logdet, recomputed, atol=1e-8)


class TestSampleStyle:
    def test_identity_chain_reduces_to_prior(self):
        torch.manual_seed(5)
        chain = saturate_gates(FlowChain(d=6, n_steps=6))
        latents = torch.randn(10, 6)
        g = torch.Generator().manual_seed(42)
        code = sample_style(latents, chain, generator=g, n_samples=3)
        prior = batch_prior(latents)
        assert torch.allclose(
            code.log_density, gaussian_log_density(code.h_s, prior), atol=1e-6
        )

    def test_log_density_recompute(self):
        torch.manual_seed(9)
        chain = FlowChain(d=8, n_steps=6).double()
        latents = torch.randn(12, 8, dtype=torch.float64)
        prior = batch_prior(latents)
        c = chain.condition(prior.mu0)
        g = torch.Generator().manual_seed(0)
        noise = torch.randn(4, 8, generator=g, dtype=torch.float64)
        z0 = prior.mu0 + noise * torch.sqrt(prior.var0)
        result = chain.forward(z0, c.expand(4, -1))
        expected = gaussian_log_density(z0, prior) - result.logdet
        # independent path through sample_style with the same draws
        g2 = torch.Generator().manual_seed(0)
        code = sample_style(latents, chain, generator=g2, n_samples=4)
        assert torch.allclose(code.h_s, result.z, atol=1e-12)
        assert torch.allclose(code.log_density, expected, atol=1e-8)

    def test_seeded_determinism(self):
        torch.manual_seed(2)
        chain = FlowChain(d=5, n_steps=3)
        latents = torch.randn(6, 5)
        a = sample_style(latents, chain, torch.Generator().manual_seed(77))
        b = sample_style(latents, chain, torch.Generator().manual_seed(77))
        assert torch.equal(a.h_s, b.h_s)
        assert torch.equal(a.log_density, b.log_density)

    def test_too_few_instances_propagates(self):
        chain = FlowChain(d=4, n_steps=2)
        with pytest.raises(TooFewInstances):
            sample_style(torch.zeros(1, 4), chain)
