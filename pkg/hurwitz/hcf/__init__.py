from hurwitz.hcf.digits import EMPTY, DigitSeq, is_digit
from hurwitz.hcf.expansion import Expansion, expand_source, gauss_map, hcf_expand, tail_at
from hurwitz.hcf.qpairs import QPairTrace, evaluate, mirror_check, q_pair, qpair_of
