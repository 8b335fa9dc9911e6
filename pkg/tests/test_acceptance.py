"""Release gates: one test per criterion, each a single pass/fail line.

The cheap gates (metric fidelity, parser/property/alert oracles, flow and
gradient checks, update accounting) run in seconds.  The model-quality
gates share session fixtures: a 30K synthetic corpus, a guided sequence
model pretrained on its first 10K molecules, and an adversarially trained
transfer stage on 5K-per-pool synthesizability data.
"""

import csv
import math
import random
import time
from pathlib import Path

import pytest
import torch

from helpers import graph_isomorphic
from molshift.chemprops import (
    atomic_weights,
    build_fragment_table,
    bundled_alerts,
    content_properties,
    match_alerts,
    sa_score,
)
from molshift.data import make_desk_corpus
from molshift.guidedvae import (
    PretrainConfig,
    VAEConfig,
    Vocabulary,
    elbo_loss,
    excitation_loss,
    inhibition_loss,
    pad_batch,
    pretrain,
)
from molshift.metrics import (
    evaluate,
    gm,
    property_scales,
    report_from_pairs,
    synthesizability_task,
)
from molshift.smiles import BondOrder, read_smiles, write
from molshift.styleflow import FlowChain
from molshift.transfer import (
    Discriminator,
    Generator,
    TransferBundle,
    TransferConfig,
    cycle_loss,
    gradient_penalty,
    recon_loss,
    style_loss,
    train,
    train_latent,
)
from test_chemprops import _oracle_match

DATA = Path(__file__).parent / "data"


# ----------------------------------------------------------- 1: metric math


def test_c1_geometric_mean_reproduces_reported_rows():
    assert gm(0.871, 0.789, 0.589) == pytest.approx(0.739, abs=1e-3)
    assert gm(3.068, 0.741, 0.472) == pytest.approx(1.024, abs=1e-3)


# ------------------------------------------- 2: parser and property oracles


def _components(n_atoms: int, bonds) -> int:
    parent = list(range(n_atoms))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for bond in bonds:
        parent[find(bond.a)] = find(bond.b)
    return len({find(i) for i in range(n_atoms)})


def _oracle_rings(graph) -> int:
    # cycle rank of the bond graph
    return len(graph.bonds) - len(graph.atoms) + _components(
        len(graph.atoms), graph.bonds
    )


def _oracle_mw(graph) -> float:
    weights = atomic_weights()
    total = 0.0
    for i, atom in enumerate(graph.atoms):
        total += weights[atom.element] + graph.total_h(i) * weights["H"]
    return total


def _oracle_charge(graph) -> int:
    return sum(a.formal_charge for a in graph.atoms)


def _oracle_hba(graph) -> int:
    return sum(1 for a in graph.atoms if a.element in ("N", "O"))


def _oracle_hbd(graph) -> int:
    return sum(
        1
        for i, a in enumerate(graph.atoms)
        if a.element in ("N", "O") and graph.total_h(i) >= 1
    )


def _bond_in_cycle(graph, skip: int) -> bool:
    # a bond is a ring bond iff its endpoints stay connected without it
    bond = graph.bonds[skip]
    frontier = [bond.a]
    seen = {bond.a}
    while frontier:
        i = frontier.pop()
        if i == bond.b:
            return True
        for k, other in enumerate(graph.bonds):
            if k == skip:
                continue
            if other.a == i and other.b not in seen:
                seen.add(other.b)
                frontier.append(other.b)
            elif other.b == i and other.a not in seen:
                seen.add(other.a)
                frontier.append(other.a)
    return False


def _degree(graph, idx: int) -> int:
    return sum(1 for b in graph.bonds if idx in (b.a, b.b))


def _oracle_rotatable(graph) -> int:
    count = 0
    for i, bond in enumerate(graph.bonds):
        if bond.order is not BondOrder.SINGLE:
            continue
        if _bond_in_cycle(graph, i):
            continue
        if _degree(graph, bond.a) >= 2 and _degree(graph, bond.b) >= 2:
            count += 1
    return count


def test_c2_roundtrip_and_property_oracles_on_bundled_corpus():
    t0 = time.monotonic()
    corpus = [
        line.strip()
        for line in (DATA / "corpus500.smi").read_text().splitlines()
        if line.strip()
    ]
    assert len(corpus) == 500

    for smiles in corpus:
        graph = read_smiles(smiles)
        out = write(graph)
        assert graph_isomorphic(graph, read_smiles(out)), (smiles, out)

        if len(graph.atoms) <= 30:
            props = content_properties(graph)
            assert props.rings == _oracle_rings(graph), smiles
            assert props.mw == pytest.approx(_oracle_mw(graph), abs=1e-9), smiles
            assert props.net_charge == _oracle_charge(graph), smiles
            assert props.hba == _oracle_hba(graph), smiles
            assert props.hbd == _oracle_hbd(graph), smiles
            assert props.rot_bonds == _oracle_rotatable(graph), smiles
    assert time.monotonic() - t0 < 60.0


# --------------------------------------------------- 3: alert matcher oracle


def test_c3_alert_matcher_equals_exhaustive_enumeration():
    t0 = time.monotonic()
    molecules = [
        line.strip()
        for line in (DATA / "alerts50.smi").read_text().splitlines()
        if line.strip()
    ]
    alerts = bundled_alerts()
    assert len(molecules) == 50 and len(alerts) == 10

    for smiles in molecules:
        graph = read_smiles(smiles)
        got = set(match_alerts(graph, alerts))
        want = {a.id for a in alerts if _oracle_match(a, graph)}
        assert got == want, smiles
    assert time.monotonic() - t0 < 60.0


# --------------------------------------------------------- 4: flow behavior


def test_c4_flow_inversion_logdet_and_masking():
    # round-trip inversion at the largest supported shape
    torch.manual_seed(4)
    chain = FlowChain(16, n_steps=6).double()
    c = chain.condition(torch.randn(128, 16, dtype=torch.float64))
    z0 = torch.randn(128, 16, dtype=torch.float64)
    result = chain(z0, c)
    back = chain.invert(result.z, c)
    assert (back - z0).abs().max().item() <= 1e-5

    # accumulated log-determinant vs a finite-difference Jacobian
    chain8 = FlowChain(8, n_steps=6).double()
    c8 = chain8.condition(torch.randn(3, 8, dtype=torch.float64))
    z8 = torch.randn(3, 8, dtype=torch.float64)
    logdet = chain8(z8, c8).logdet
    h = 1e-6
    for row in range(3):
        jac = torch.zeros(8, 8, dtype=torch.float64)
        for j in range(8):
            up, down = z8[row].clone(), z8[row].clone()
            up[j] += h
            down[j] -= h
            f_up = chain8(up.unsqueeze(0), c8[row : row + 1]).z[0]
            f_down = chain8(down.unsqueeze(0), c8[row : row + 1]).z[0]
            jac[:, j] = (f_up - f_down) / (2 * h)
        sign, fd_logdet = torch.linalg.slogdet(jac)
        assert sign.item() == 1.0
        assert fd_logdet.item() == pytest.approx(logdet[row].item(), abs=1e-3)

    # autoregressive masking, verified by perturbation on every step
    d = 6
    chain6 = FlowChain(d, n_steps=6).double()
    ctx = torch.randn(1, d, dtype=torch.float64)
    for step in chain6.steps:
        z = torch.randn(1, d, dtype=torch.float64)
        eps0, phi0 = step(z, ctx)
        for j in range(d):
            bumped = z.clone()
            bumped[0, j] += 0.37
            eps1, phi1 = step(bumped, ctx)
            assert torch.equal(eps0[0, : j + 1], eps1[0, : j + 1])
            assert torch.equal(phi0[0, : j + 1], phi1[0, : j + 1])


# ------------------------------------------------------- 5: gradient checks


def _fd(loss_fn, tensor, index, h=1e-6) -> float:
    with torch.no_grad():
        orig = tensor[index].item()
        tensor[index] = orig + h
        up = loss_fn().item()
        tensor[index] = orig - h
        down = loss_fn().item()
        tensor[index] = orig
    return (up - down) / (2 * h)


def _check_param(loss_fn, tensor, indices, rel=1e-3):
    loss = loss_fn()
    grads = torch.autograd.grad(loss, tensor, retain_graph=False)[0]
    for index in indices:
        fd = _fd(loss_fn, tensor.data, index)
        assert grads[index].item() == pytest.approx(fd, rel=rel, abs=1e-8)


def test_c5_analytic_gradients_match_central_differences():
    torch.manual_seed(5)

    # sequence-model objective
    corpus = ["CCO", "CCCC", "CCN", "CC(C)O", "CCCO", "OCCO"]
    vocab = Vocabulary.build(corpus)
    config = VAEConfig(
        vocab=vocab, token_embed_dim=8, hidden_dim=12, rnn_layers=1,
        latent_dim=10, head_hidden=4, max_len=12,
    )
    from molshift.guidedvae import VAEModel

    model = VAEModel(config).double()
    ids = pad_batch([vocab.encode(s) for s in corpus])
    noise = torch.randn(len(corpus), 10, dtype=torch.float64)

    def elbo():
        parts, _ = elbo_loss(model, ids, kl_weight=0.05, noise=noise)
        return parts.total

    for tensor, indices in [
        (model.to_mean.weight, [(0, 0), (3, 5)]),
        (model.embed.weight, [(4, 1)]),
        (model.to_tokens.bias, [(2,)]),
    ]:
        _check_param(elbo, tensor, indices)

    # attribute heads: spotlight term, then the suppression term
    labels = torch.randn(len(corpus), 8, dtype=torch.float64)
    kinds = ["continuous"] * 7 + ["binary"]
    z_exc = torch.randn(len(corpus), 10, dtype=torch.float64, requires_grad=True)
    _check_param(lambda: excitation_loss(model, z_exc, labels, kinds), z_exc,
                 [(0, 0), (2, 7), (5, 1)])
    z_inh = torch.randn(len(corpus), 10, dtype=torch.float64, requires_grad=True)
    _check_param(
        lambda: inhibition_loss(model, z_inh, labels, kinds, adversarial=False),
        z_inh, [(0, 8), (3, 9)],
    )
    # the adversarial variant flips the sign of the latent gradient and
    # leaves the head gradient alone - check the relation explicitly
    probe = torch.autograd.grad(
        inhibition_loss(model, z_inh, labels, kinds, adversarial=False), z_inh
    )[0]
    flipped = torch.autograd.grad(
        inhibition_loss(model, z_inh, labels, kinds, adversarial=True), z_inh
    )[0]
    assert torch.allclose(flipped[:, 8:], -probe[:, 8:], atol=1e-12)
    assert torch.equal(flipped[:, :8], torch.zeros_like(flipped[:, :8]))

    # transfer losses
    d = 6
    gen = Generator(d, hidden=8).double()
    disc = Discriminator(d, hidden=8).double()
    z_c = torch.randn(5, d, dtype=torch.float64)
    h_s = torch.randn(5, d, dtype=torch.float64)
    z_g_in = torch.randn(5, d, dtype=torch.float64)

    weight = gen.net[0].weight
    _check_param(lambda: style_loss(disc, gen(z_c, h_s), 1), weight,
                 [(0, 0), (4, 3)])
    _check_param(lambda: recon_loss(gen, z_c, h_s), weight, [(1, 2)])
    _check_param(lambda: cycle_loss(gen, z_g_in, z_c, h_s), weight, [(2, 4)])

    real = torch.randn(6, d, dtype=torch.float64)
    fake = torch.randn(6, d, dtype=torch.float64)
    dweight = disc.net[0].weight

    def penalty():
        mix = torch.Generator().manual_seed(77)  # same interpolates every call
        return gradient_penalty(disc, real, fake, generator=mix)

    _check_param(penalty, dweight, [(0, 0), (3, 2)])


# ----------------------------------------------- heavyweight shared fixtures


DESK_SIZE = 30000
PRETRAIN_SIZE = 10000
POOL_SIZE = 5000
TEST_SIZE = 100


@pytest.fixture(scope="session")
def desk_setup():
    t0 = time.monotonic()
    big = make_desk_corpus(DESK_SIZE, seed=0)
    config = VAEConfig(
        vocab=Vocabulary.build(big),
        token_embed_dim=64,
        hidden_dim=256,
        rnn_layers=1,
        latent_dim=64,
        max_len=96,
        kl_weight=0.3,  # prior-sample validity needs the tighter posterior
    )
    fit = pretrain(
        big[:PRETRAIN_SIZE],
        config,
        PretrainConfig(epochs=90, batch_size=64, lr=1e-3),
    )
    return {
        "big": big,
        "fit": fit,
        "heldout": big[PRETRAIN_SIZE : PRETRAIN_SIZE + 1000],
        "seconds": time.monotonic() - t0,
    }


@pytest.fixture(scope="session")
def sa_setup(desk_setup, tmp_path_factory):
    t0 = time.monotonic()
    big = desk_setup["big"]
    model = desk_setup["fit"].model

    graphs = [read_smiles(s) for s in big]
    table = build_fragment_table(graphs, seed=0)
    task = synthesizability_task(lambda g: sa_score(g, table))
    labels = [task.label(task.score(g)) for g in graphs]
    source_all = [s for s, lab in zip(big, labels) if lab == "source"]
    target_all = [s for s, lab in zip(big, labels) if lab == "target"]
    assert len(source_all) >= POOL_SIZE + TEST_SIZE
    assert len(target_all) >= POOL_SIZE
    source_pool = source_all[:POOL_SIZE]
    target_pool = target_all[:POOL_SIZE]
    test_set = source_all[-TEST_SIZE:]
    scales = property_scales([content_properties(g) for g in graphs])

    config = TransferConfig(
        style_instances=10,
        disc_per_gen=5,
        iterations=2000,
        batch_size=32,
        hidden=256,
        flow_steps=6,
        decode_count=10,
        lr=1e-4,
        seed=0,
    )
    result = train(source_pool, target_pool, model, config)
    bundle = TransferBundle(
        model=model, generator=result.generator, flow=result.flow, config=config
    )
    out_dir = tmp_path_factory.mktemp("acceptance_eval")
    csv_path = out_dir / "eval_a.csv"
    report = evaluate(
        test_set, bundle, task, scales, target_pool, seed=0, csv_path=csv_path
    )
    return {
        "task": task,
        "scales": scales,
        "bundle": bundle,
        "target_pool": target_pool,
        "test_set": test_set,
        "report": report,
        "csv_path": csv_path,
        "out_dir": out_dir,
        "seconds": time.monotonic() - t0,
    }


# --------------------------------------------------- 6: guided disentanglement


def test_c6_guided_heads_and_prior_decode_validity(desk_setup):
    fit = desk_setup["fit"]
    model = fit.model
    heldout = desk_setup["heldout"]
    vocab = model.config.vocab

    ids = pad_batch([vocab.encode(s) for s in heldout])
    with torch.no_grad():
        mean, _, _ = model.encode(ids, noise=torch.zeros(len(heldout), 64))
        pred_exc = model.excitation_heads[0](mean[:, 0:1]).squeeze(-1)
        pred_inh = model.inhibition_heads[0](mean[:, 8:]).squeeze(-1)
    mw_spec = fit.specs[0]
    assert mw_spec.name == "mw"
    true = torch.tensor([
        mw_spec.normalize(content_properties(read_smiles(s)).mw) for s in heldout
    ])
    ss_tot = ((true - true.mean()) ** 2).sum().item()
    r2_exc = 1.0 - ((true - pred_exc) ** 2).sum().item() / ss_tot
    r2_inh = 1.0 - ((true - pred_inh) ** 2).sum().item() / ss_tot
    assert r2_exc - r2_inh >= 0.2, (r2_exc, r2_inh)

    g = torch.Generator().manual_seed(123)
    decoded = model.decode_smiles(model.sample_prior(500, generator=g))
    valid = 0
    for s in decoded:
        try:
            read_smiles(s)
            valid += 1
        except Exception:
            pass
    assert valid / 500 >= 0.80, f"prior validity {valid / 500:.3f}"
    assert desk_setup["seconds"] <= 7200


# ------------------------------------------------- 7: end-to-end transfer


def test_c7_transfer_beats_random_pairing(sa_setup):
    report = sa_setup["report"]
    task = sa_setup["task"]
    scales = sa_setup["scales"]

    rng = random.Random(0)
    random_pairs = [
        (x, rng.choice(sa_setup["target_pool"])) for x in sa_setup["test_set"]
    ]
    baseline = report_from_pairs(random_pairs, task, scales)

    assert report.mean_imp > 0.0, report.mean_imp
    assert report.mean_pss >= 0.6, report.mean_pss
    assert report.validity >= 80.0, report.validity
    assert report.sr > baseline.sr, (report.sr, baseline.sr)
    assert sa_setup["seconds"] <= 3600


# ------------------------------------------------------- 8: update accounting


def _toy_pools(d=10, n=96, seed=0):
    g = torch.Generator().manual_seed(seed)
    pool_0 = torch.randn(n, d, generator=g) * 0.4 - 1.0
    pool_1 = torch.randn(n, d, generator=g) * 0.4 + 1.0
    return pool_0, pool_1


def test_c8_update_counts_and_frozen_encoder():
    pool_0, pool_1 = _toy_pools()
    for n_critic, iterations in ((1, 8), (5, 23)):
        config = TransferConfig(
            style_instances=4, disc_per_gen=n_critic, iterations=iterations,
            batch_size=6, hidden=16, flow_steps=2, seed=0,
        )
        result = train_latent(pool_0, pool_1, config)
        assert result.disc_updates == iterations
        assert result.gen_updates == iterations // n_critic
        remainder = result.disc_updates - n_critic * result.gen_updates
        assert 0 <= remainder < n_critic

    # the sequence model's parameters never move during transfer training
    corpus = ["CCO", "CCC", "CCCC", "CCN", "CCCO", "CCCN", "OCCO", "CCCCC"]
    vae_config = VAEConfig(
        vocab=Vocabulary.build(corpus), token_embed_dim=8, hidden_dim=16,
        rnn_layers=1, latent_dim=10, head_hidden=4, max_len=12,
    )
    fit = pretrain(corpus, vae_config, PretrainConfig(epochs=2, batch_size=4))
    hash_before = fit.model.parameter_hash()
    train(
        corpus[:4], corpus[4:], fit.model,
        TransferConfig(style_instances=2, disc_per_gen=5, iterations=10,
                       batch_size=2, hidden=16, flow_steps=2, seed=0),
    )
    assert fit.model.parameter_hash() == hash_before


# ------------------------------------------------------------ 9: determinism


def test_c9_identical_seeds_reproduce_byte_identical_csv(sa_setup):
    second = sa_setup["out_dir"] / "eval_b.csv"
    evaluate(
        sa_setup["test_set"],
        sa_setup["bundle"],
        sa_setup["task"],
        sa_setup["scales"],
        sa_setup["target_pool"],
        seed=0,
        csv_path=second,
    )
    bytes_a = Path(sa_setup["csv_path"]).read_bytes()
    bytes_b = second.read_bytes()
    assert bytes_a == bytes_b
    rows = list(csv.DictReader(bytes_a.decode().splitlines()))
    assert len(rows) == TEST_SIZE
