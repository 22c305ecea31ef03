"""End-to-end computation: branch data, transported bases, vanishing cycles, relation.

``MonodromyModel`` caches each stage so that the CLI and the tests can ask
for exactly what they need.  Tracks for the 36 paths are independent and
may be computed in worker processes.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from . import hiprec, surface, symplectic, tracker
from .errors import SurfaceError, TrackingError
from .pencil import PencilConfig, branch_points, line_dual_points, setup_report

log = logging.getLogger(__name__)


@dataclass
class ModelOptions:
    basepoint: complex = tracker.DEFAULT_BASEPOINT
    lasso_radius_factor: float = 0.25
    track: tracker.TrackOptions = field(default_factory=tracker.TrackOptions)
    waypoints: Optional[list] = None
    cluster_radius: float = 1e-5
    workers: int = 1


def _track_job(args):
    cfg, i, opts, waypoints = args
    return tracker.track_mu(cfg, i, opts, waypoints)


class MonodromyModel:
    def __init__(self, cfg: Optional[PencilConfig] = None, options: Optional[ModelOptions] = None):
        self.cfg = cfg or PencilConfig()
        self.options = options or ModelOptions()
        self._tracks: dict[int, tracker.RootTrack] = {}

    # -------------------------------------------------- setup data
    @cached_property
    def setup(self):
        return setup_report(self.cfg)

    @cached_property
    def dual_points(self):
        return line_dual_points(self.cfg)

    @cached_property
    def a_roots(self) -> np.ndarray:
        return branch_points(self.cfg, 0.0)

    @cached_property
    def waypoints(self) -> list:
        if self.options.waypoints is not None:
            return self.options.waypoints
        return tracker.default_mu_waypoints(self.cfg)

    @cached_property
    def track_options(self) -> tracker.TrackOptions:
        o = self.options.track
        return tracker.TrackOptions(
            initial_step=o.initial_step, max_step=o.max_step, min_step=o.min_step,
            contract=o.contract, eps_collide=o.eps_collide, terminal_floor=o.terminal_floor,
            order_basepoint=self.options.basepoint,
        )

    def chi_table(self):
        return tracker.chi_table(self.cfg, self.options.lasso_radius_factor)

    def infinity_permutation(self):
        return tracker.infinity_permutation(self.cfg, 0.0)

    # -------------------------------------------------- the base of the cover
    @cached_property
    def letter_perms(self) -> dict:
        """chi of the straight lasso from the basepoint around each a_j."""
        a = self.a_roots
        B = self.options.basepoint
        ref = tracker.fiber_at(self.cfg, 0.0, B)
        out = {}
        for j in range(len(a)):
            r = tracker.lasso_radius(a[j], a, self.options.lasso_radius_factor)
            loop = tracker.lasso(B, complex(a[j]), r)
            others = [a[k] for k in range(len(a)) if k != j]
            out[j + 1] = tracker.cover_permutation(self.cfg, 0.0, loop, ref, others)
        return out

    @cached_property
    def base_tuple(self) -> surface.GeneratorTuple:
        t = surface.ordered_basis(self.a_roots, self.options.basepoint, self.letter_perms)
        if t.product_perm() != self.infinity_permutation():
            raise SurfaceError("ordered product disagrees with the monodromy at infinity")
        return t

    @cached_property
    def ribbon(self) -> surface.RibbonSurface:
        order = (0,) + self.base_tuple.labels
        return surface.build_ribbon_surface(self.letter_perms, order, expected_euler=-4)

    @cached_property
    def homology(self) -> surface.HomologyBasis:
        return surface.HomologyBasis(self.ribbon)

    # -------------------------------------------------- tracking
    def track(self, i: int) -> tracker.RootTrack:
        if i not in self._tracks:
            try:
                self._tracks[i] = tracker.track_mu(self.cfg, i, self.track_options, self.waypoints)
            except TrackingError as exc:
                raise type(exc)(f"path mu_{i}: {exc}") from exc
        return self._tracks[i]

    def tracks(self) -> list:
        todo = [i for i in range(1, 37) if i not in self._tracks]
        if todo and self.options.workers > 1:
            jobs = [(self.cfg, i, self.track_options, self.waypoints) for i in todo]
            with ProcessPoolExecutor(self.options.workers) as ex:
                for i, tr in zip(todo, ex.map(_track_job, jobs)):
                    self._tracks[i] = tr
        return [self.track(i) for i in range(1, 37)]

    def collision_table(self) -> list[tuple]:
        return [tuple(int(x) for x in tr.collision) for tr in self.tracks()]

    def collision_certificate(self, i: int):
        v = self.dual_points[i - 1].v
        return hiprec.certify_collision(self.cfg, v, self.options.cluster_radius)

    # -------------------------------------------------- vanishing cycles
    def transported(self, i: int) -> surface.GeneratorTuple:
        return surface.transport_events(self.base_tuple, self.track(i).events)

    def lasso(self, i: int) -> surface.VanishingLasso:
        tr = self.track(i)
        return surface.vanishing_lasso(self.transported(i), tr.collision)

    def cycle_class(self, i: int) -> surface.HomologyCycle:
        return surface.vanishing_cycle_from_lasso(self.homology, self.lasso(i))

    @cached_property
    def classes(self) -> list:
        self.tracks()
        return [self.cycle_class(i) for i in range(1, 37)]

    @cached_property
    def relation(self) -> symplectic.RelationReport:
        return symplectic.verify_relation([c.coords for c in self.classes], self.homology.J)

    @cached_property
    def mod2_order(self) -> int:
        return symplectic.generation_mod2([c.coords for c in self.classes], self.homology.J)

    @cached_property
    def deck_symmetry(self):
        return surface.deck_symmetry([c.coords for c in self.classes], self.homology.J)
