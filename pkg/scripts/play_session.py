#!/usr/bin/env python3
"""Play one episode against a running session service from the command line.

Start the service first:  amrsim serve --port 8000
"""

import argparse
import json
import urllib.request


def call(method, url, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(url, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--base-url", default="http://127.0.0.1:8000")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-steps", type=int, default=10)
    args = parser.parse_args()

    session = call("POST", f"{args.base_url}/api/sessions", {
        "seed": args.seed,
        "overrides": {"environment.max_time_steps": args.max_steps},
    })
    sid = session["session_id"]
    n = session["action_space"]["num_slots"]
    print(f"session {sid}: {n} patients, antibiotics {session['antibiotics']}")

    finished = False
    while not finished:
        # naive policy: treat everyone with antibiotic 1
        step = call("POST", f"{args.base_url}/api/sessions/{sid}/step",
                    {"actions": [1] * n})
        r = step["reward"]
        print(f"step {step['step_index']:3d}  overall {r['overall']:7.3f}  "
              f"individual {r['individual']:7.3f}  community {r['community']:7.3f}")
        finished = step["finished"]

    reveal = step["reveal"]
    print("\nepisode reveal:")
    print(f"  cumulative reward: {reveal['cumulative_reward']}")
    print(f"  outcome counts:    {reveal['outcome_counts']}")
    print(f"  final true sigma:  {reveal['true_sigma_trajectory'][-1]}")


if __name__ == "__main__":
    main()
