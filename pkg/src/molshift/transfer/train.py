"""Adversarial transfer training over frozen-encoder latents.

Every iteration updates the discriminator on real/regenerated/generated
latents plus a gradient penalty; every N-th iteration also updates the
generator and the style flow with the style, self-reconstruction, and
cycle objectives. The sequence model is frozen throughout, so pool
latents are encoded once up front and cached.
"""

from dataclasses import dataclass, field
from pathlib import Path

import torch

from ..guidedvae import VAEModel, pad_batch
from ..styleflow import FlowChain, sample_style
from .losses import adversarial_losses, cycle_loss, gradient_penalty, recon_loss, style_loss
from .networks import Discriminator, Generator


class EmptyPool(ValueError):
    pass


class NonFiniteLoss(RuntimeError):
    def __init__(self, iteration: int, checkpoint: str | None):
        self.iteration = iteration
        self.checkpoint = checkpoint
        super().__init__(
            f"non-finite loss at iteration {iteration}"
            + (f"; last checkpoint: {checkpoint}" if checkpoint else "")
        )


@dataclass(frozen=True)
class TransferConfig:
    style_instances: int = 10  # K exemplars per style draw
    disc_per_gen: int = 5  # N discriminator steps per generator step
    gp_weight: float = 10.0
    w_style: float = 1.0
    w_recon: float = 1.0
    w_cycle: float = 1.0
    iterations: int = 2000
    batch_size: int = 32
    lr: float = 1e-4
    hidden: int = 256
    flow_steps: int = 6
    decode_count: int = 10  # k candidates per transferred molecule
    pss_floor: float = 0.7
    seed: int = 0
    checkpoint_every: int = 500
    checkpoint_dir: str | None = None

    def __post_init__(self):
        assert self.disc_per_gen >= 1
        assert self.decode_count >= 1
        assert min(self.w_style, self.w_recon, self.w_cycle) >= 0
        assert self.gp_weight >= 0

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class TrainResult:
    generator: Generator
    flow: FlowChain
    discriminator: Discriminator
    disc_updates: int
    gen_updates: int
    log_rows: list[dict] = field(default_factory=list)
    checkpoint_path: str | None = None


def encode_pool(
    model: VAEModel, smiles_list: list[str], batch_size: int = 256
) -> torch.Tensor:
    """Posterior means for a list of molecules, computed once."""
    if not smiles_list:
        raise EmptyPool("no molecules to encode")
    vocab = model.config.vocab
    rows = []
    with torch.no_grad():
        for start in range(0, len(smiles_list), batch_size):
            chunk = smiles_list[start : start + batch_size]
            ids = pad_batch([vocab.encode(s) for s in chunk])
            mean, _, _ = model.encode(ids, noise=torch.zeros(len(chunk), model.config.latent_dim))
            rows.append(mean)
    return torch.cat(rows, dim=0)


def _style_batch(
    latents: torch.Tensor,
    exclude: torch.Tensor,
    k: int,
    generator: torch.Generator,
) -> torch.Tensor:
    """K style-instance latents drawn without replacement, skipping the
    rows currently used as content (the reference molecules)."""
    mask = torch.ones(len(latents), dtype=torch.bool)
    mask[exclude] = False
    candidates = mask.nonzero(as_tuple=True)[0]
    if len(candidates) < k:
        raise EmptyPool(f"style pool too small: {len(candidates)} < {k}")
    perm = torch.randperm(len(candidates), generator=generator)[:k]
    return latents[candidates[perm]]


def _save(path_dir, tag, gen, flow, disc, config, vae_hash) -> str:
    path = Path(path_dir) / f"transfer_{tag}.pt"
    torch.save(
        {
            "format_version": 1,
            "generator": gen.state_dict(),
            "flow": flow.state_dict(),
            "discriminator": disc.state_dict(),
            "config": config.to_dict(),
            "vae_parameter_hash": vae_hash,
        },
        str(path),
    )
    return str(path)


def train_latent(
    pool_0: torch.Tensor,
    pool_1: torch.Tensor,
    config: TransferConfig,
    vae_hash: str = "",
) -> TrainResult:
    """Algorithm core over pre-encoded latent pools (style 0 = source,
    style 1 = target)."""
    if len(pool_0) == 0 or len(pool_1) == 0:
        raise EmptyPool("both style pools must be non-empty")
    d = pool_0.shape[1]
    assert pool_1.shape[1] == d

    torch.manual_seed(config.seed)
    rng = torch.Generator().manual_seed(config.seed)
    gen = Generator(d, hidden=config.hidden)
    disc = Discriminator(d, hidden=config.hidden)
    flow = FlowChain(d, n_steps=config.flow_steps)
    opt_d = torch.optim.Adam(disc.parameters(), lr=config.lr, betas=(0.5, 0.9))
    opt_g = torch.optim.Adam(
        list(gen.parameters()) + list(flow.parameters()),
        lr=config.lr,
        betas=(0.5, 0.9),
    )

    result = TrainResult(
        generator=gen, flow=flow, discriminator=disc,
        disc_updates=0, gen_updates=0,
    )
    pools = (pool_0, pool_1)
    b = config.batch_size
    k = config.style_instances

    for it in range(config.iterations):
        idx = [
            torch.randint(len(pools[s]), (b,), generator=rng) for s in (0, 1)
        ]
        z_c = [pools[s][idx[s]] for s in (0, 1)]
        phi = [_style_batch(pools[s], idx[s], k, rng) for s in (0, 1)]

        # -- discriminator step (every iteration)
        with torch.no_grad():
            h_s = [sample_style(phi[s], flow, generator=rng, n_samples=b).h_s
                   for s in (0, 1)]
            z_hat = [gen(z_c[s], h_s[s]) for s in (0, 1)]
            z_g_01 = gen(z_c[0], h_s[1])  # source content, target style
            z_g_10 = gen(z_c[1], h_s[0])
            z_g = torch.cat([z_g_01, z_g_10])
        parts = adversarial_losses(disc, z_c[0], z_hat[0], z_c[1], z_hat[1], z_g)
        gp = gradient_penalty(
            disc, torch.cat([z_c[0], z_c[1]]), z_g, generator=rng
        )
        d_loss = parts.total + config.gp_weight * gp
        if not torch.isfinite(d_loss):
            raise NonFiniteLoss(it, result.checkpoint_path)
        opt_d.zero_grad()
        d_loss.backward()
        opt_d.step()
        result.disc_updates += 1

        row = {
            "iteration": it,
            "d_loss": d_loss.item(),
            "gp": gp.item(),
        }

        # -- generator + flow step (every N-th iteration)
        if (it + 1) % config.disc_per_gen == 0:
            h_s = [sample_style(phi[s], flow, generator=rng, n_samples=b).h_s
                   for s in (0, 1)]
            z_g_01 = gen(z_c[0], h_s[1])
            z_g_10 = gen(z_c[1], h_s[0])
            l_style = style_loss(disc, z_g_01, 1) + style_loss(disc, z_g_10, 0)
            l_recon = recon_loss(gen, z_c[0], h_s[0]) + recon_loss(gen, z_c[1], h_s[1])
            l_cycle = cycle_loss(gen, z_g_01, z_c[0], h_s[0]) + cycle_loss(
                gen, z_g_10, z_c[1], h_s[1]
            )
            g_loss = (
                config.w_style * l_style
                + config.w_recon * l_recon
                + config.w_cycle * l_cycle
            )
            if not torch.isfinite(g_loss):
                raise NonFiniteLoss(it, result.checkpoint_path)
            opt_g.zero_grad()
            g_loss.backward()
            opt_g.step()
            result.gen_updates += 1
            row.update(
                g_loss=g_loss.item(), l_style=l_style.item(),
                l_recon=l_recon.item(), l_cycle=l_cycle.item(),
            )
        result.log_rows.append(row)

        if (
            config.checkpoint_dir is not None
            and (it + 1) % config.checkpoint_every == 0
        ):
            result.checkpoint_path = _save(
                config.checkpoint_dir, f"iter{it + 1:06d}", gen, flow, disc,
                config, vae_hash,
            )

    if config.checkpoint_dir is not None:
        result.checkpoint_path = _save(
            config.checkpoint_dir, "final", gen, flow, disc, config, vae_hash
        )
    return result


def train(
    source_pool: list[str],
    target_pool: list[str],
    model: VAEModel,
    config: TransferConfig,
) -> TrainResult:
    """Encode both pools with the frozen sequence model and run the
    latent training loop."""
    overlap = set(source_pool) & set(target_pool)
    assert not overlap, f"pools must be disjoint; {len(overlap)} shared"
    vae_hash = model.parameter_hash()
    pool_0 = encode_pool(model, source_pool)
    pool_1 = encode_pool(model, target_pool)
    result = train_latent(pool_0, pool_1, config, vae_hash=vae_hash)
    assert model.parameter_hash() == vae_hash  # frozen-encoder contract
    return result


def load_transfer_checkpoint(
    path, expected_vae_hash: str | None = None
) -> tuple[Generator, FlowChain, Discriminator, TransferConfig, str]:
    payload = torch.load(str(path), weights_only=False)
    config = TransferConfig(**payload["config"])
    vae_hash = payload["vae_parameter_hash"]
    if expected_vae_hash is not None and vae_hash != expected_vae_hash:
        raise ValueError(
            "checkpoint was trained against a different frozen encoder"
        )
    d = payload["generator"]["net.4.bias"].shape[0]
    gen = Generator(d, hidden=config.hidden)
    gen.load_state_dict(payload["generator"])
    disc = Discriminator(d, hidden=config.hidden)
    disc.load_state_dict(payload["discriminator"])
    flow = FlowChain(d, n_steps=config.flow_steps)
    flow.load_state_dict(payload["flow"])
    gen.eval()
    disc.eval()
    flow.eval()
    return gen, flow, disc, config, vae_hash
