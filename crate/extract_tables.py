"""One-shot helper: pull the four tennis tables out of paper.md into fixtures.

Not part of the deliverable; deleted after use.
"""
import re

src = open("/root/crate/paper.md").read()
lines = src.splitlines()


def parse_rows(start_marker, end_marker, expect_numbers):
    i0 = next(i for i, l in enumerate(lines) if start_marker in l)
    i1 = next(i for i, l in enumerate(lines[i0:], start=i0) if end_marker in l)
    rows = []
    for l in lines[i0:i1]:
        if "&" not in l or "Player" in l or "OUTPUTS" in l or "Ranking" in l:
            continue
        cleaned = l.replace("\\\\", "").replace("\\hline", "")
        cells = [c.strip() for c in cleaned.split("&")]
        cells = [c for c in cells if c]
        if not cells or not re.match(r"^\d+$", cells[0]):
            continue
        rank = int(cells[0])
        nums = []
        name_parts = []
        for c in cells[1:]:
            if re.match(r"^-?\d+(\.\d+)?$", c):
                nums.append(c)
            else:
                name_parts.append(c)
        name = " ".join(" ".join(name_parts).split())
        assert len(nums) == expect_numbers, (l, nums)
        rows.append((rank, name, nums))
    return rows


t3 = parse_rows("Novak Djokovic      &   67", "tabla3", 9)
assert len(t3) == 46, len(t3)
t5 = parse_rows("Novak\tDjokovic\t&&\t1.00000", "tabla5", 2)
assert len(t5) == 46, len(t5)
t6 = parse_rows("Djokovic\t&\t&\t0.98992", "tabla6", 4)
assert len(t6) == 46, len(t6)
t4 = parse_rows("Novak Djokovic  &   0.97099", "tabla4", 10)
assert len(t4) == 46, len(t4)

names3 = [n for _, n, _ in t3]
for t in (t5, t6, t4):
    assert [n for _, n, _ in t] == names3, [n for _, n, _ in t][:5]

# Rust source for the embedded dataset.
with open("/root/crate/tennis_rows.rs.snippet", "w") as f:
    f.write("pub(super) const ATP_2014: [(&str, [f64; 9]); 46] = [\n")
    for rank, name, nums in t3:
        vals = ", ".join(f"{v}.0" for v in nums)
        f.write(f'    ("{name}", [{vals}]),\n')
    f.write("];\n")

fx = "/root/crate/crates/cli/tests/fixtures"
with open(f"{fx}/table5_expert.csv", "w") as f:
    f.write("player,expected,std_dev\n")
    for _, name, nums in t5:
        f.write(f"{name},{nums[0]},{nums[1]}\n")
with open(f"{fx}/table6_uniform_entropy.csv", "w") as f:
    f.write("player,e_uncond,sd_uncond,e_entropy,sd_entropy\n")
    for _, name, nums in t6:
        f.write(f"{name},{','.join(nums)}\n")
with open(f"{fx}/table4_pbar.csv", "w") as f:
    f.write("player," + ",".join(f"p{(k+1)*10:03d}" for k in range(10)) + "\n")
    for _, name, nums in t4:
        f.write(f"{name},{','.join(nums)}\n")

print("ok: 46 rows per table")
print("spot:", t3[0], t5[4], t6[18], t4[2][2][:3])
