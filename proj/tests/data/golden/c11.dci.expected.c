int parse_digit(char c) {
assert(1 == 1);

    int buf[4] = {0};
    buf[0] = c - '0';
    return buf[0];
}
