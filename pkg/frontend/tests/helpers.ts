import type { CandidateDoc, PoseDoc, SceneBundle } from "../src/types";

export function pose(xyz: [number, number, number], quat?: [number, number, number, number]): PoseDoc {
  return { xyz, quat: quat ?? [0, 0, 0, 1] };
}

export function makeCandidate(index: number, overrides: Partial<CandidateDoc> = {}): CandidateDoc {
  return {
    index,
    score: 1 - index * 0.1,
    per_step_status: ["exact"],
    tcp_in_object: pose([0, 0, 0.01 * index]),
    tcp_world: pose([0.5, 0.01 * index, 0.3]),
    finger_config: { left: 0.02, right: 0.02 },
    ...overrides,
  };
}

export function makeBundle(nCandidates: number, overrides: Partial<SceneBundle> = {}): SceneBundle {
  const candidates = Array.from({ length: nCandidates }, (_, i) => makeCandidate(i));
  return {
    session: "s1",
    revision: 1,
    object: {
      mesh: {
        vertices: [
          [-0.02, -0.02, -0.02], [0.02, -0.02, -0.02],
          [0.02, 0.02, -0.02], [-0.02, 0.02, -0.02],
          [-0.02, -0.02, 0.02], [0.02, -0.02, 0.02],
          [0.02, 0.02, 0.02], [-0.02, 0.02, 0.02],
        ],
        faces: [
          [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7],
          [0, 1, 5], [0, 5, 4], [2, 3, 7], [2, 7, 6],
          [1, 2, 6], [1, 6, 5], [3, 0, 4], [3, 4, 7],
        ],
      },
      pose: pose([0.5, 0, 0.28]),
      digest: "d".repeat(64),
    },
    steps: [
      { pose: pose([0.5, 0, 0.28]), tol_pos: [0, 0, 0], tol_rot: [0, 0, 0] },
    ],
    robot: {
      joints: [
        { name: "j1", type: "revolute", anchor: [0, 0, 0], axis: [0, 0, 1] },
        { name: "j2", type: "revolute", anchor: [0, 0, 0.3], axis: [0, 1, 0] },
      ],
      tip: pose([0.3, 0, 0.5]),
    },
    candidates,
    selected: null,
    roi: null,
    content_hash: "c".repeat(64),
    ...overrides,
  };
}
