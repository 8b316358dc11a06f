int parse_digit(char c) {
    int buf[4] = {0};
    buf[0] = c - '0';
    return buf[0];
}
