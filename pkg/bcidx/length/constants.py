L_ETA = "l_eta"
L_PAIR = "l_pair"
L_ENC = "l_enc"
L_BLOCK = "l_block"
L_EBLOCK = "l_eblock"

BUILTIN_LENGTH_CONSTANTS = (L_ETA, L_PAIR, L_ENC, L_BLOCK, L_EBLOCK)

UNDEFINED = "undefined"

SUM_HEAD = "+"
PRODUCT_HEAD = "*"
